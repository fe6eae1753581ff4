#include "lsdev/gff/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "lsdev/errors.hpp"
#include "lsdev/gff/harmonic.hpp"
#include "lsdev/gff/partition.hpp"
#include "lsdev/gff/sampler.hpp"
#include "lsdev/numerics.hpp"

namespace lsdev::gff {

namespace {

void check_eta(double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw DomainError("0 < eta < 1", "eta = " + std::to_string(eta));
}

}  // namespace

double level_threshold(int n, double eta) { return 2.0 * kGamma * eta * std::log(static_cast<double>(n)); }

LevelSet level_set(const Field& field, double eta, bool collect_sites) {
    check_eta(eta);
    LevelSet out;
    out.eta = eta;
    out.threshold = level_threshold(field.n(), eta);
    const auto& v = field.values();
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] < out.threshold) continue;
        ++out.count;
        if (collect_sites) out.sites.push_back(field.grid().site(k));
    }
    return out;
}

double expected_level_count(const GreenOperator& green, double eta) {
    check_eta(eta);
    const double thr = level_threshold(green.grid().n(), eta);
    const auto& diag = green.diagonal();
    double sum = 0.0;
    for (double g : diag) {
        if (g > 0.0) sum += normal_upper_tail(thr / std::sqrt(g));
    }
    return sum;
}

DaviaudSweep estimate_daviaud_exponent(const std::vector<int>& ns, double eta, const mc::ReplicaPlan& plan) {
    check_eta(eta);
    if (ns.empty()) throw std::invalid_argument("daviaud sweep needs at least one N");
    for (std::size_t i = 1; i < ns.size(); ++i) {
        if (ns[i] <= ns[i - 1]) throw std::invalid_argument("N list must be increasing");
    }
    DaviaudSweep out;
    out.eta = eta;
    out.limit = 2.0 * (1.0 - eta * eta);
    std::vector<std::pair<double, double>> fit_points;
    for (int n : ns) {
        const FieldSampler sampler(n);
        mc::ReplicaPlan p = plan;
        p.master_seed = mc::derive_seed(plan.master_seed, static_cast<std::uint64_t>(n));
        const std::vector<double> counts = mc::parallel_map(p, [&](std::uint64_t seed, std::size_t) {
            return static_cast<double>(level_set(sampler.sample(seed), eta, false).count);
        });
        const double log_n = std::log(static_cast<double>(n));
        std::vector<double> exps;
        std::vector<double> logs;
        for (double c : counts) {
            if (c <= 0.0) continue;
            exps.push_back(std::log(c) / log_n);
            logs.push_back(std::log(c));
        }
        DaviaudPoint pt;
        pt.n = n;
        pt.count = mc::summarize(counts);
        if (!exps.empty()) {
            pt.exponent = mc::summarize(exps);
            fit_points.emplace_back(log_n, mc::summarize(logs).mean);
        }
        pt.exponent.zero_count = counts.size() - exps.size();
        pt.low_confidence = 2 * pt.exponent.zero_count >= counts.size();
        out.points.push_back(pt);
    }
    if (fit_points.size() >= 2) out.fit = mc::fit_exponent(fit_points);
    out.increasing = out.points.size() >= 2;
    for (std::size_t i = 1; i < out.points.size(); ++i) {
        if (!(out.points[i].exponent.mean > out.points[i - 1].exponent.mean)) out.increasing = false;
    }
    return out;
}

double coarse_tail_exponent(double zeta, double b) {
    return 2.0 * ((1.0 - zeta) - b * b / (1.0 - zeta));
}

CoarseProbe coarse_exceedance_probe(int n, double zeta, double b, const mc::ReplicaPlan& plan) {
    if (!(zeta >= 0.0 && zeta < 1.0)) throw DomainError("0 <= zeta < 1", "zeta = " + std::to_string(zeta));
    if (!(b > 1.0 - zeta)) throw DomainError("b > 1 - zeta", "b = " + std::to_string(b));
    CoarseProbe out;
    out.n = n;
    out.zeta = zeta;
    out.b = b;
    out.predicted_decay = -coarse_tail_exponent(zeta, b);
    out.predicted_probability = std::pow(static_cast<double>(n), coarse_tail_exponent(zeta, b));
    if (out.predicted_probability < 10.0 / static_cast<double>(plan.replicas)) {
        std::ostringstream msg;
        msg << "predicted probability " << out.predicted_probability << " is below 10/replicas = "
            << 10.0 / static_cast<double>(plan.replicas);
        throw UnobservableError(out.predicted_probability, msg.str());
    }
    const std::vector<Box> boxes = flat_partition(n, zeta, Base::Full);
    out.boxes = boxes.size();
    const bool singletons = std::all_of(boxes.begin(), boxes.end(), [](const Box& d) { return d.size() == 1; });
    const double thr = level_threshold(n, b);
    const FieldSampler sampler(n);
    const std::vector<int> hits = mc::parallel_map(plan, [&](std::uint64_t seed, std::size_t) {
        const Field f = sampler.sample(seed);
        if (singletons) return f.max() >= thr ? 1 : 0;
        for (const Box& d : boxes) {
            if (decompose(f, d).phi >= thr) return 1;
        }
        return 0;
    });
    std::size_t successes = 0;
    for (int h : hits) successes += static_cast<std::size_t>(h);
    out.probability = mc::summarize_proportion(successes, hits.size());
    out.decay = successes == 0 ? std::numeric_limits<double>::infinity()
                               : -std::log(out.probability.p_hat) / std::log(static_cast<double>(n));
    return out;
}

}  // namespace lsdev::gff

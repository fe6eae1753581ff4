#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lsdev/experiments/manifest.hpp"
#include "lsdev/gw/gw.hpp"
#include "lsdev/mc/rng.hpp"
#include "lsdev/rates/rates.hpp"
#include "parts.hpp"

namespace lsdev::experiments::detail {

namespace m = manifest;
using report::Rule;

namespace {

rates::BbmRateQuery random_bbm_query(mc::Stream& s) {
    const double x = 0.2 + 2.3 * s.uniform();
    const double lower = std::max(0.0, 1.0 - 0.5 * x * x);
    return {x, lower + (1.0 - lower) * (0.02 + 0.96 * s.uniform()), 1.0};
}

rates::GffRateQuery random_gff_query(mc::Stream& s) {
    const double eta = 0.1 + 0.85 * s.uniform();
    const double lower = 1.0 - eta * eta;
    return {eta, lower + (1.0 - lower) * (0.02 + 0.96 * s.uniform())};
}

const rates::GridOracleConfig kGffOracle{32, 6, 0.25, 1};

}  // namespace

Prepared prepare_rates(Params& p) {
    const rates::BbmRateQuery bq{p.real("x", 1.0), p.real("a", 0.75), 1.0};
    const rates::GffRateQuery gq{p.real("eta", 0.6), bq.a};
    const auto queries = p.count("queries", m::kRatesQueries);
    const std::uint64_t seed = part_seed(p, 1);
    rates::validate(bq);
    rates::validate(gq);

    return [=](const RunContext&) {
        report::Report r = make_report("rates", 1);
        r.info("psi", rates::psi(bq.x), "x^2/2 - 1");

        const rates::VariationalSolution bs = rates::solve_bbm_variational(bq);
        const rates::VariationalSolution bc = rates::grid_certify(rates::bbm_level_problem(bq));
        const double i_rate = rates::rate_I(bq.a, bq.x);
        r.info("bbm.rate_I", i_rate, "x^2/(2(1-a)) - 1");
        r.info("bbm.maximizer_s", bs.maximizer[0]);
        r.info("bbm.maximizer_y", bs.maximizer[1]);
        r.add(check("bbm.closed_form_value", bs.value, Rule::AbsWithin, -i_rate, m::kRatesValueTol, "-I t"));
        r.add(check("bbm.certified_value", bc.value, Rule::AbsWithin, -i_rate, m::kRatesValueTol, "-I t"));
        r.add(check("bbm.closed_form_residual", std::abs(bs.constraint_residual), Rule::AtMost,
                    m::kRatesResidualTol));
        r.add(check("bbm.certified_residual", std::abs(bc.constraint_residual), Rule::AtMost,
                    m::kRatesResidualTol));

        const rates::VariationalSolution gs = rates::solve_gff_variational(gq);
        const rates::VariationalSolution gc = rates::grid_certify(rates::gff_level_problem(gq), kGffOracle);
        const double j_rate = rates::rate_J(gq.a, gq.eta);
        r.info("gff.rate_J", j_rate, "2 eta^2/(1-a) - 2");
        r.info("gff.maximizer_s", gs.maximizer[0]);
        r.info("gff.maximizer_b", gs.maximizer[1]);
        r.info("gff.maximizer_y", gs.maximizer[2]);
        r.add(check("gff.closed_form_value", gs.value, Rule::AbsWithin, -j_rate / 2.0, m::kRatesValueTol, "-J/2"));
        r.add(check("gff.certified_value", gc.value, Rule::AbsWithin, -j_rate / 2.0, m::kRatesValueTol, "-J/2"));
        r.add(check("gff.closed_form_residual", std::abs(gs.constraint_residual), Rule::AtMost,
                    m::kRatesResidualTol));
        r.add(check("gff.certified_residual", std::abs(gc.constraint_residual), Rule::AtMost,
                    m::kRatesResidualTol));

        mc::Stream s(seed);
        double bbm_err = 0.0, bbm_res = 0.0, gff_err = 0.0, gff_res = 0.0;
        for (std::uint64_t i = 0; i < queries; ++i) {
            const rates::BbmRateQuery q = random_bbm_query(s);
            const rates::VariationalSolution c = rates::grid_certify(rates::bbm_level_problem(q));
            const rates::VariationalSolution f = rates::solve_bbm_variational(q);
            bbm_err = std::max(bbm_err, std::abs(c.value + rates::rate_I(q.a, q.x)));
            bbm_res = std::max({bbm_res, std::abs(c.constraint_residual), std::abs(f.constraint_residual)});
        }
        for (std::uint64_t i = 0; i < queries; ++i) {
            const rates::GffRateQuery q = random_gff_query(s);
            const rates::VariationalSolution c = rates::grid_certify(rates::gff_level_problem(q), kGffOracle);
            const rates::VariationalSolution f = rates::solve_gff_variational(q);
            gff_err = std::max(gff_err, std::abs(c.value + rates::rate_J(q.a, q.eta) / 2.0));
            gff_res = std::max({gff_res, std::abs(c.constraint_residual), std::abs(f.constraint_residual)});
        }
        const std::string n = std::to_string(queries) + " random admissible queries";
        r.add(check("sweep.bbm_max_value_error", bbm_err, Rule::AtMost, m::kRatesValueTol, {}, {}, {}, n));
        r.add(check("sweep.bbm_max_residual", bbm_res, Rule::AtMost, m::kRatesResidualTol, {}, {}, {}, n));
        r.add(check("sweep.gff_max_value_error", gff_err, Rule::AtMost, m::kRatesValueTol, {}, {}, {}, n));
        r.add(check("sweep.gff_max_residual", gff_res, Rule::AtMost, m::kRatesResidualTol, {}, {}, {}, n));
        return r;
    };
}

namespace {

struct GwCase {
    gw::GwPlan plan;
    double alpha;
    double delta;
};

const std::vector<std::vector<double>> kTables{
    {0.1, 0.3, 0.3, 0.2, 0.1},
    {0.25, 0.25, 0.5},
    {0.0, 0.5, 0.3, 0.2},
};

gw::OffspringLaw case_law(int family, int i, int j) {
    switch (family) {
        case 0: return gw::OffspringLaw::poisson(0.8 + 0.15 * ((i + j) % 4));
        case 1: return gw::OffspringLaw::geometric(0.45 + 0.1 * ((i + j) % 3));
        default: return gw::OffspringLaw::table(kTables[static_cast<std::size_t>((i + j) % 3)]);
    }
}

// Deterministic sweep over law families, horizons, initial sizes and (alpha, delta).
GwCase sweep_case(int i) {
    static constexpr int kHorizons[] = {2, 4, 8, 12, 16};
    static constexpr std::uint64_t kEll[] = {1, 10, 100, 1000};
    static constexpr double kAlpha[] = {1.2, 1.5, 2.0};
    static constexpr double kDelta[] = {0.3, 0.6, 1.0};
    GwCase c{{}, kAlpha[(i / 3) % 3], kDelta[i % 3]};
    c.plan.ell = kEll[i % 4];
    for (int j = 0; j < kHorizons[i % 5]; ++j) c.plan.laws.push_back(case_law(i % 3, i, j));
    return c;
}

gw::PropBoundQuery bound_query(const GwCase& c, double fraction) {
    gw::PropBoundQuery q{c.alpha, c.delta, {}, c.plan};
    for (const gw::OffspringLaw& law : c.plan.laws) {
        const double top = gw::max_admissible_lambda(law, c.alpha);
        q.lambdas.push_back(std::isfinite(top) ? fraction * top : 1.0);
    }
    return q;
}

}  // namespace

Prepared prepare_gw_verify(Params& p) {
    const auto replicas = positive(p, "replicas", m::kGwReplicas);
    const auto configs = positive(p, "configs", m::kGwConfigurations);
    const double fraction = p.real("lambda_fraction", 0.9);
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("lambda_fraction", "must lie in (0, 1]");
    const std::uint64_t seed = part_seed(p, 2);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("gw-verify", 2);
        std::size_t violations = 0;
        for (std::uint64_t i = 0; i < configs; ++i) {
            const GwCase c = sweep_case(static_cast<int>(i));
            const gw::PropBound b = gw::prop_bound(bound_query(c, fraction));
            const gw::ExceedanceEstimate e =
                gw::empirical_exceedance(c.plan, b.count_threshold, plan(replicas, mc::derive_seed(seed, i), ctx));
            const double lower = e.proportion.p_hat - m::kGwStderrSlack * e.proportion.std_error;
            const std::string tag = "config" + std::to_string(i);
            const std::string note = c.plan.laws.front().describe() + " n=" + std::to_string(c.plan.n()) +
                                     " ell=" + std::to_string(c.plan.ell) + " alpha=" + report::format_number(c.alpha) +
                                     " delta=" + report::format_number(c.delta);
            r.add(estimate(tag + ".p_hat", e.proportion.p_hat, e.proportion.std_error, note));
            r.info(tag + ".threshold", b.threshold);
            r.add(check(tag + ".p_hat_minus_2se", lower, Rule::AtMost, b.bound, {}, "exceedance bound"));
            if (lower > b.bound) ++violations;
        }

        // Bounded laws, two generations: the exact law of Z_2 by convolution.
        int exact_case = 0;
        for (std::size_t t = 0; t < kTables.size(); ++t) {
            for (std::uint64_t ell : {1, 3}) {
                GwCase c{{{gw::OffspringLaw::table(kTables[t]), gw::OffspringLaw::table(kTables[(t + 1) % 3])}, ell},
                         1.5, 0.5};
                const gw::PropBound b = gw::prop_bound(bound_query(c, fraction));
                const auto dist = gw::exact_distribution(c.plan);
                double tail = 0.0;
                if (dist) {
                    for (std::size_t k = 0; k < dist->size(); ++k) {
                        if (gw::BigInt(k) >= b.count_threshold) tail += (*dist)[k];
                    }
                }
                const std::string tag = "exact" + std::to_string(exact_case++);
                r.add(holds(tag + ".available", dist.has_value()));
                r.add(check(tag + ".probability", tail, Rule::AtMost, b.bound + m::kGwExactSlack, {},
                            "exceedance bound", {}, "ell=" + std::to_string(ell)));
            }
        }
        r.add(check("violations", static_cast<double>(violations), Rule::AtMost, 0.0));
        return r;
    };
}

}  // namespace lsdev::experiments::detail

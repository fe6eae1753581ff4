#include <cmath>
#include <string>
#include <vector>

#include "lsdev/bbm/bbm.hpp"
#include "lsdev/experiments/manifest.hpp"
#include "lsdev/rates/rates.hpp"
#include "parts.hpp"

namespace lsdev::experiments::detail {

namespace m = manifest;
using report::Rule;

Prepared prepare_bbm_first_moment(Params& p) {
    const auto replicas = positive(p, "moment_replicas", m::kMomentReplicas);
    const std::uint64_t seed = part_seed(p, 3);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("bbm-first-moment", 3);
        const double t0 = m::kMomentPopulationTime;
        const double t1 = m::kMomentLevelTime;
        // One run per replica: the population at t0 and the level counts at t1.
        const auto runs = mc::parallel_map(plan(replicas, seed, ctx), [&](std::uint64_t s, std::size_t) {
            const auto snaps = bbm::simulate_bbm({t1, {t0}, s, bbm::BbmRunConfig{}.particle_cap});
            std::vector<double> out{static_cast<double>(snaps.front().particles.size())};
            for (double x : m::kMomentLevels) out.push_back(static_cast<double>(bbm::count_level(snaps.back(), x).count));
            return out;
        });
        auto column = [&](std::size_t k) {
            std::vector<double> v;
            v.reserve(runs.size());
            for (const auto& row : runs) v.push_back(row[k]);
            return mc::summarize(v);
        };
        const mc::Estimate pop = column(0);
        r.add(check("population_t5", pop.mean, Rule::SeWithin, std::exp(t0), m::kMomentSeTol, "e^t", pop.std_error));
        for (std::size_t k = 0; k < m::kMomentLevels.size(); ++k) {
            const double x = m::kMomentLevels[k];
            const mc::Estimate e = column(k + 1);
            r.add(check("level_count_t6_x" + report::format_number(x), e.mean, Rule::SeWithin,
                        bbm::expected_count_oracle(t1, x), m::kMomentSeTol, "e^t P(B_t >= x t)", e.std_error));
        }
        return r;
    };
}

Prepared prepare_bbm_biggins(Params& p) {
    const double x = p.real("x", m::kBigginsX);
    const double t = p.real("t", m::kBigginsT);
    const auto replicas = positive(p, "replicas", m::kBigginsReplicas);
    const double tol = p.real("tolerance", m::kBigginsTol);
    if (!(x > 0.0 && x < std::sqrt(2.0))) throw ConfigError("x", "level-set growth needs 0 < x < sqrt 2");
    if (!(t > 0.0)) throw ConfigError("t", "must be positive");
    const std::uint64_t seed = part_seed(p, 4);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("bbm-biggins", 4);
        const bbm::LevelExponentEstimate e = bbm::estimate_level_exponent(t, x, plan(replicas, seed, ctx));
        r.add(check("exponent", e.estimate.mean, Rule::AbsWithin, 1.0 - 0.5 * x * x, tol, "1 - x^2/2",
                    e.estimate.std_error, e.low_confidence ? "low confidence: many empty level sets" : ""));
        r.info("log_first_moment_over_t", std::log(bbm::expected_count_oracle(t, x)) / t,
               "log E N(t, x) / t, an upper bound on the mean exponent by Jensen");
        r.info("zero_replicas", static_cast<double>(e.zero_count));
        return r;
    };
}

Prepared prepare_bbm_max_ldp(Params& p) {
    const double x = p.real("ldp_x", m::kLdpX);
    const std::vector<double> times = p.reals("ldp_times", std::vector<double>(m::kLdpTimes.begin(), m::kLdpTimes.end()));
    const auto replicas = positive(p, "ldp_replicas", m::kLdpReplicas);
    const double tol = p.real("ldp_tolerance", m::kLdpTol);
    if (!(x > std::sqrt(2.0))) throw ConfigError("ldp_x", "the maximum tail needs x > sqrt 2");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || (i > 0 && times[i] <= times[i - 1])) {
            throw ConfigError("ldp_times", "must be positive and strictly increasing");
        }
    }
    const std::uint64_t seed = part_seed(p, 5);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("bbm-max-ldp", 5);
        const double target = rates::psi(x);
        std::vector<double> gaps;
        double last_rate = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            const bbm::MaxTailEstimate e =
                bbm::estimate_max_tail(t, x, plan(replicas, mc::derive_seed(seed, i), ctx));
            const std::string tag = "t" + report::format_number(t);
            const double p_hat = e.proportion.p_hat;
            const double se = p_hat > 0.0 ? e.proportion.std_error / (p_hat * t) : std::nan("");
            r.add(estimate(tag + ".probability", p_hat, e.proportion.std_error));
            r.add(estimate(tag + ".rate", e.rate, se, e.rate_is_bound ? "upper confidence bound, no exceedances" : ""));
            gaps.push_back(std::abs(e.rate - target));
            last_rate = e.rate;
        }
        r.add(check("rate_at_largest_t", last_rate, Rule::AbsWithin, target, tol, "x^2/2 - 1"));
        const double t_last = times.back();
        r.info("first_moment_rate_at_largest_t", -std::log(bbm::expected_count_oracle(t_last, x)) / t_last,
               "-log E N(t, x) / t, a lower bound on the rate by Markov");
        bool trending = true;
        for (std::size_t i = 1; i < gaps.size(); ++i) trending = trending && gaps[i] <= gaps[i - 1];
        r.add(holds("distance_nonincreasing_in_t", trending));
        return r;
    };
}

Prepared prepare_bbm_events(Params& p) {
    bbm::DiscretizationPlan d;
    d.delta = p.real("delta", d.delta);
    d.delta_prime = p.real("delta_prime", d.delta_prime);
    d.epsilon = p.real("epsilon", d.epsilon);
    d.cutoff = p.real("cutoff", d.cutoff);
    d.t = p.real("events_t", 6.0);
    const auto replicas = positive(p, "events_replicas", 200);
    bbm::validate(d);
    const std::uint64_t seed = part_seed(p, 14);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("bbm-events", std::nullopt);
        const auto flags = mc::parallel_map(plan(replicas, seed, ctx), [&](std::uint64_t s, std::size_t) {
            const bbm::EventReport e = bbm::check_events(bbm::simulate_bbm(bbm::discretized_run(d, s)), d);
            return std::vector<double>{e.e1 ? 1.0 : 0.0, e.e2 ? 1.0 : 0.0};
        });
        std::size_t e1 = 0, e2 = 0;
        for (const auto& f : flags) {
            e1 += f[0] > 0.0;
            e2 += f[1] > 0.0;
        }
        const mc::ProportionEstimate p1 = mc::summarize_proportion(e1, flags.size());
        const mc::ProportionEstimate p2 = mc::summarize_proportion(e2, flags.size());
        r.info("steps", d.steps());
        r.info("mesh", d.mesh());
        r.add(estimate("e1_frequency", p1.p_hat, p1.std_error, "positions inside [-C t, C t] at every s_i"));
        r.add(estimate("e2_frequency", p2.p_hat, p2.std_error, "descendant counts below t^2 e^{t^delta}"));
        return r;
    };
}

Prepared prepare_nbbm(Params& p) {
    const auto seeds = positive(p, "seeds", m::kNbbmSeeds);
    const std::vector<std::int64_t> caps =
        p.integers("caps", std::vector<std::int64_t>(m::kNbbmCaps.begin(), m::kNbbmCaps.end()));
    const double t = p.real("t", m::kNbbmT);
    for (std::int64_t c : caps) {
        if (c < 1) throw ConfigError("caps", "every cap must be at least 1");
    }
    if (!(t > 0.0)) throw ConfigError("t", "must be positive");
    const std::uint64_t seed = part_seed(p, 6);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("nbbm", 6);
        std::vector<double> times;
        for (double s = 1.0; s < t; s += 1.0) times.push_back(s);
        for (std::int64_t cap : caps) {
            const auto cap_n = static_cast<std::uint64_t>(cap);
            // Same seeds for every cap: the BBM underneath is shared.
            const auto bad = mc::parallel_map(plan(seeds, seed, ctx), [&](std::uint64_t s, std::size_t) {
                const bbm::NbbmRun run = bbm::simulate_nbbm({t, times, s, bbm::BbmRunConfig{}.particle_cap}, cap_n);
                int count = 0;
                for (std::size_t k = 0; k < run.bbm_max.size(); ++k) count += run.nbbm_max[k] > run.bbm_max[k];
                return count;
            });
            double violations = 0.0;
            for (int b : bad) violations += b;
            r.add(check("cap" + std::to_string(cap) + ".violations", violations, Rule::AtMost, 0.0, {},
                        "N-BBM max <= BBM max", {},
                        std::to_string(seeds) + " seeds, " + std::to_string(times.size() + 1) + " snapshots each"));
        }
        return r;
    };
}

}  // namespace lsdev::experiments::detail

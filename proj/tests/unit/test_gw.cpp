#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "lsdev/errors.hpp"
#include "lsdev/gw/gw.hpp"
#include "lsdev/mc/replicas.hpp"

using namespace lsdev;
using namespace lsdev::gw;

namespace {

// Brute-force law of Z_n: enumerate every offspring assignment.
std::vector<double> enumerate_law(const std::vector<std::vector<double>>& pmfs, std::uint64_t ell) {
    std::vector<double> dist(ell + 1, 0.0);
    dist[ell] = 1.0;
    for (const auto& pmf : pmfs) {
        std::vector<double> next;
        for (std::size_t z = 0; z < dist.size(); ++z) {
            if (dist[z] == 0.0) continue;
            std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t left, std::size_t sum, double p) {
                if (left == 0) {
                    if (next.size() <= sum) next.resize(sum + 1, 0.0);
                    next[sum] += dist[z] * p;
                    return;
                }
                for (std::size_t k = 0; k < pmf.size(); ++k) {
                    if (pmf[k] > 0.0) rec(left - 1, sum + k, p * pmf[k]);
                }
            };
            rec(z, 0, 1.0);
        }
        dist = next;
    }
    return dist;
}

double direct_table_mgf(const std::vector<double>& pmf, double lambda) {
    double s = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) s += pmf[k] * std::exp(lambda * static_cast<double>(k));
    return s;
}

}  // namespace

TEST(OffspringLaw, MeansMatchDefinitions) {
    EXPECT_DOUBLE_EQ(OffspringLaw::deterministic(3).mean(), 3.0);
    EXPECT_DOUBLE_EQ(OffspringLaw::geometric(0.25).mean(), 4.0);
    EXPECT_DOUBLE_EQ(OffspringLaw::poisson(1.7).mean(), 1.7);
    EXPECT_NEAR(OffspringLaw::table({0.2, 0.3, 0.5}).mean(), 1.3, 1e-15);
    EXPECT_THROW(OffspringLaw::table({0.5, 0.4}), DomainError);
    EXPECT_THROW(OffspringLaw::geometric(0.0), DomainError);
    EXPECT_THROW(OffspringLaw::poisson(-1.0), DomainError);
}

TEST(MgfCondition, DeterministicAlwaysHolds) {
    for (double alpha : {1.01, 1.5, 3.0}) {
        for (double lambda : {0.01, 1.0, 50.0}) {
            const MgfCheck c = verify_mgf_condition(OffspringLaw::deterministic(4), lambda, alpha);
            EXPECT_TRUE(c.holds);
            EXPECT_NEAR(c.log_gap, (alpha - 1.0) * lambda * 4.0, 1e-9 * lambda);
        }
    }
    EXPECT_TRUE(std::isinf(max_admissible_lambda(OffspringLaw::deterministic(2), 1.1)));
}

TEST(MgfCondition, PoissonClosedFormComparison) {
    const OffspringLaw law = OffspringLaw::poisson(2.5);
    for (double alpha : {1.1, 1.5, 2.0}) {
        for (double lambda = 0.05; lambda < 3.0; lambda += 0.05) {
            const bool expected = std::expm1(lambda) <= alpha * lambda;
            EXPECT_EQ(verify_mgf_condition(law, lambda, alpha).holds, expected) << alpha << " " << lambda;
        }
        const double star = max_admissible_lambda(law, alpha);
        EXPECT_NEAR(std::expm1(star), alpha * star, 1e-9);
        EXPECT_GT(star, 0.0);
    }
}

TEST(MgfCondition, TableByDirectSummation) {
    const std::vector<double> pmf{0.5, 0.0, 0.5};
    const OffspringLaw law = OffspringLaw::table(pmf);
    const MgfCheck c = verify_mgf_condition(law, 0.1, 1.2);
    const double lhs = direct_table_mgf(pmf, 0.1);
    const double rhs = std::exp(1.2 * 0.1 * 1.0);
    EXPECT_EQ(c.holds, lhs <= rhs);
    EXPECT_NEAR(c.log_mgf, std::log(lhs), 1e-14);
    EXPECT_NEAR(c.log_gap, std::log(rhs) - std::log(lhs), 1e-14);
}

TEST(MgfCondition, GeometricMatchesSeriesAndDiverges) {
    const double p = 0.4;
    const OffspringLaw law = OffspringLaw::geometric(p);
    for (double lambda : {0.05, 0.2, 0.4}) {
        double series = 0.0;
        for (int k = 1; k < 4000; ++k) series += p * std::exp((k - 1) * std::log1p(-p) + lambda * k);
        EXPECT_NEAR(law.log_mgf(lambda), std::log(series), 1e-10);
    }
    EXPECT_THROW(law.log_mgf(-std::log(0.6)), DivergenceError);
    EXPECT_THROW(verify_mgf_condition(law, 1.0, 1.5), DivergenceError);
    const double star = max_admissible_lambda(law, 1.5);
    EXPECT_LT(star, law.mgf_radius());
    EXPECT_NEAR(verify_mgf_condition(law, star, 1.5).log_gap, 0.0, 1e-9);
}

TEST(BSequence, WorkedExamples) {
    const std::vector<double> means{2.0, 1.0};
    const BSequence b = b_sequence(1.25, 0.25, 3, means);
    ASSERT_EQ(b.values.size(), 3u);
    EXPECT_EQ(b.values[0], 3);
    EXPECT_EQ(b.values[1], 9);
    EXPECT_EQ(b.values[2], 13);
    EXPECT_TRUE(b.within_cap);

    const std::vector<double> ones(12, 1.0);
    const BSequence d = b_sequence(1.5, 0.5, 1, ones);
    for (std::size_t i = 0; i < d.values.size(); ++i) EXPECT_EQ(d.values[i], BigInt(1) << i);
}

TEST(BSequence, CapHoldsOnRandomDrawsAgainstIntegerOracle) {
    mc::Stream s(404);
    for (int draw = 0; draw < 1000; ++draw) {
        // Dyadic parameters keep an independent integer recursion exact:
        // growth = g/8, m_i = k_i/8, b_{i+1} = max(floor(g k_i b_i / 64), ell).
        const std::uint64_t g = 9 + s() % 12;  // alpha + delta in [1.125, 2.5]
        const std::uint64_t ell = 1 + s() % 1000;
        const std::size_t n = 1 + s() % 20;
        std::vector<double> means(n);
        std::vector<std::uint64_t> k(n);
        for (std::size_t i = 0; i < n; ++i) {
            k[i] = 1 + s() % 24;
            means[i] = static_cast<double>(k[i]) / 8.0;
        }
        const double alpha = 1.0 + 1.0 / 16.0;
        const double delta = static_cast<double>(g) / 8.0 - alpha;
        const BSequence b = b_sequence(alpha, delta, ell, means);
        EXPECT_TRUE(b.within_cap);

        BigInt oracle = ell;
        for (std::size_t i = 0; i < n; ++i) {
            BigInt next = (BigInt(g) * k[i] * oracle) / 64;
            oracle = next > ell ? next : BigInt(ell);
            EXPECT_EQ(b.values[i + 1], oracle);
        }
        EXPECT_LE(BigRational(b.values.back()), b.cap);
    }
}

TEST(BSequence, RejectsBadArguments) {
    const std::vector<double> zero{0.0};
    const std::vector<double> one{1.0};
    EXPECT_THROW(b_sequence(1.5, 0.1, 1, zero), DomainError);
    EXPECT_THROW(b_sequence(1.0, 0.1, 1, one), DomainError);
    EXPECT_THROW(b_sequence(1.5, 0.0, 1, one), DomainError);
    EXPECT_THROW(b_sequence(1.5, 0.1, 0, one), DomainError);
}

TEST(PropBound, SingleGenerationDisplay) {
    PropBoundQuery q;
    q.alpha = 1.5;
    q.delta = 0.5;
    q.plan.laws = {OffspringLaw::poisson(2.0)};
    q.plan.ell = 40;
    q.lambdas = {0.5};
    const PropBound pb = prop_bound(q);
    EXPECT_NEAR(pb.raw_bound, std::exp(-0.5 * 40.0 * 0.5 / 2.0 + 0.5), 1e-15);
    EXPECT_DOUBLE_EQ(pb.threshold, 2.0 * 40.0 * 2.0);
    EXPECT_EQ(pb.count_threshold, 160);
}

TEST(PropBound, DeterministicLawsNeverReachThreshold) {
    PropBoundQuery q;
    q.alpha = 1.2;
    q.delta = 0.1;
    q.plan.laws = {OffspringLaw::deterministic(2), OffspringLaw::deterministic(3), OffspringLaw::deterministic(1)};
    q.plan.ell = 5;
    q.lambdas = {1.0, 1.0, 1.0};
    const PropBound pb = prop_bound(q);
    const GwTrajectory tr = simulate_gw(q.plan, 1);
    EXPECT_LT(BigInt(tr.z.back()), pb.count_threshold);
    const auto ex = empirical_exceedance(q.plan, pb.count_threshold, {100, 1, 1});
    EXPECT_EQ(ex.proportion.p_hat, 0.0);
    ASSERT_TRUE(ex.exact.has_value());
    EXPECT_EQ(*ex.exact, 0.0);
}

TEST(PropBound, FailingGenerationIsNamed) {
    PropBoundQuery q;
    q.alpha = 1.1;
    q.delta = 0.1;
    q.plan.laws = {OffspringLaw::poisson(1.0), OffspringLaw::poisson(1.0), OffspringLaw::geometric(0.5)};
    q.plan.ell = 10;
    q.lambdas = {0.1, 0.1, 5.0};
    try {
        prop_bound(q);
        FAIL() << "expected MgfConditionError";
    } catch (const MgfConditionError& e) {
        EXPECT_EQ(e.generation(), 2u);
    }
    q.lambdas = {0.1, 3.0, 0.1};
    try {
        prop_bound(q);
        FAIL() << "expected MgfConditionError";
    } catch (const MgfConditionError& e) {
        EXPECT_EQ(e.generation(), 1u);
    }
}

TEST(ExactConvolution, MatchesEnumerationAndRespectsBound) {
    const std::vector<std::vector<double>> pmfs{
        {0.1, 0.3, 0.4, 0.2},
        {0.25, 0.25, 0.25, 0.25},
        {0.0, 0.6, 0.0, 0.4},
        {0.5, 0.0, 0.5},
    };
    int bound_checks = 0;
    for (std::size_t a = 0; a < pmfs.size(); ++a) {
        for (std::size_t b = 0; b < pmfs.size(); ++b) {
            for (std::uint64_t ell = 1; ell <= 3; ++ell) {
                GwPlan plan{{OffspringLaw::table(pmfs[a]), OffspringLaw::table(pmfs[b])}, ell};
                const auto exact = exact_distribution(plan);
                ASSERT_TRUE(exact.has_value());
                const std::vector<double> brute = enumerate_law({pmfs[a], pmfs[b]}, ell);
                ASSERT_EQ(exact->size(), brute.size());
                for (std::size_t z = 0; z < brute.size(); ++z) EXPECT_NEAR((*exact)[z], brute[z], 1e-12);

                PropBoundQuery q{1.2, 0.3, {}, plan};
                q.lambdas = {max_admissible_lambda(plan.laws[0], 1.2), max_admissible_lambda(plan.laws[1], 1.2)};
                if (std::isinf(q.lambdas[0]) || std::isinf(q.lambdas[1])) continue;
                const PropBound pb = prop_bound(q);
                double tail = 0.0;
                for (std::size_t z = 0; z < brute.size(); ++z) {
                    if (BigInt(z) >= pb.count_threshold) tail += brute[z];
                }
                EXPECT_LE(tail, pb.raw_bound);
                ++bound_checks;
            }
        }
    }
    EXPECT_GT(bound_checks, 20);
}

TEST(SimulateGw, DeterministicDoubling) {
    GwPlan plan{std::vector<OffspringLaw>(10, OffspringLaw::deterministic(2)), 1};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const GwTrajectory tr = simulate_gw(plan, seed);
        EXPECT_EQ(tr.z.back(), 1024u);
        EXPECT_FALSE(tr.censored);
    }
}

TEST(SimulateGw, PoissonMeanWithinThreeStandardErrors) {
    GwPlan plan{std::vector<OffspringLaw>(5, OffspringLaw::poisson(1.0)), 100};
    const mc::Estimate e = mc::run_replicas(mc::ReplicaPlan{10000, 55, 0}, [&](std::uint64_t seed, std::size_t) {
        return static_cast<double>(simulate_gw(plan, seed).z.back());
    });
    EXPECT_NEAR(e.mean, 100.0, 3.0 * e.std_error);
}

TEST(SimulateGw, GeometricAndTableMeans) {
    GwPlan plan{{OffspringLaw::geometric(0.6), OffspringLaw::table({0.3, 0.2, 0.5}), OffspringLaw::geometric(0.9)}, 7};
    const double expected = 7.0 * (1.0 / 0.6) * 1.2 * (1.0 / 0.9);
    const mc::Estimate e = mc::run_replicas(mc::ReplicaPlan{20000, 56, 0}, [&](std::uint64_t seed, std::size_t) {
        return static_cast<double>(simulate_gw(plan, seed).z.back());
    });
    EXPECT_NEAR(e.mean, expected, 3.0 * e.std_error);
}

TEST(SimulateGw, ExtinctionIsAbsorbing) {
    GwPlan plan{{OffspringLaw::table({1.0}), OffspringLaw::poisson(3.0), OffspringLaw::deterministic(5)}, 50};
    const GwTrajectory tr = simulate_gw(plan, 9);
    for (std::size_t i = 1; i < tr.z.size(); ++i) EXPECT_EQ(tr.z[i], 0u);
}

TEST(SimulateGw, ReproducibleAndCensored) {
    GwPlan plan{std::vector<OffspringLaw>(8, OffspringLaw::poisson(1.3)), 20};
    EXPECT_EQ(simulate_gw(plan, 77).z, simulate_gw(plan, 77).z);

    GwPlan blowup{std::vector<OffspringLaw>(30, OffspringLaw::deterministic(10)), 1};
    const GwTrajectory tr = simulate_gw(blowup, 1, {1000000});
    EXPECT_TRUE(tr.censored);
    EXPECT_LT(tr.z.size(), 31u);
    const auto ex = empirical_exceedance(blowup, BigInt(1) << 100, {10, 1, 1}, {1000000});
    EXPECT_EQ(ex.censored, 10u);
    EXPECT_EQ(ex.proportion.p_hat, 1.0);
}

TEST(EmpiricalExceedance, TrivialThresholds) {
    GwPlan plan{{OffspringLaw::table({0.2, 0.5, 0.3}), OffspringLaw::table({0.4, 0.6})}, 3};
    const auto all = empirical_exceedance(plan, 0, {500, 3, 0});
    EXPECT_EQ(all.proportion.p_hat, 1.0);
    EXPECT_EQ(*all.exact, 1.0);
    const auto none = empirical_exceedance(plan, 7, {500, 3, 0});
    EXPECT_EQ(none.proportion.p_hat, 0.0);
    EXPECT_EQ(*none.exact, 0.0);
}

TEST(EmpiricalExceedance, MonteCarloAgreesWithExact) {
    GwPlan plan{{OffspringLaw::table({0.2, 0.3, 0.3, 0.2}), OffspringLaw::table({0.1, 0.6, 0.3})}, 3};
    const auto ex = empirical_exceedance(plan, 6, {20000, 8, 0});
    ASSERT_TRUE(ex.exact.has_value());
    EXPECT_NEAR(ex.proportion.p_hat, *ex.exact, 3.0 * std::sqrt(*ex.exact * (1.0 - *ex.exact) / 20000.0));
}

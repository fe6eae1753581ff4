#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lsdev/errors.hpp"
#include "lsdev/mc/rng.hpp"
#include "lsdev/rates/rates.hpp"

using namespace lsdev;
using namespace lsdev::rates;

namespace {

// Composite Simpson quadrature of the N(0, var) density over [x - y, x + y].
// Independent of erf/erfc and of the bound under test.
double interval_probability_by_quadrature(double x, double y, double var) {
    if (y == 0.0) return 0.0;
    const int panels = 4000;
    const double lo = x - y;
    const double h = 2.0 * y / panels;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
    auto density = [&](double u) { return norm * std::exp(-u * u / (2.0 * var)); };
    double sum = density(lo) + density(x + y);
    for (int k = 1; k < panels; ++k) sum += (k % 2 ? 4.0 : 2.0) * density(lo + k * h);
    return sum * h / 3.0;
}

BbmRateQuery random_bbm_query(mc::Stream& s) {
    const double x = 0.2 + 2.3 * s.uniform();
    const double lower = std::max(0.0, 1.0 - 0.5 * x * x);
    const double a = lower + (1.0 - lower) * (0.02 + 0.96 * s.uniform());
    return {x, a, 1.0};
}

GffRateQuery random_gff_query(mc::Stream& s) {
    const double eta = 0.1 + 0.85 * s.uniform();
    const double lower = 1.0 - eta * eta;
    const double a = lower + (1.0 - lower) * (0.02 + 0.96 * s.uniform());
    return {eta, a};
}

}  // namespace

TEST(Psi, ClosedFormValues) {
    EXPECT_NEAR(psi(std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(psi(2.0), 1.0);
    EXPECT_NEAR(psi(1.6), 0.28, 1e-15);
    EXPECT_THROW(psi(0.0), DomainError);
    EXPECT_THROW(psi(-1.0), DomainError);
}

TEST(RateI, ValuesAndBoundary) {
    EXPECT_DOUBLE_EQ(rate_I(0.75, 1.0), 1.0);
    for (double x : {0.3, 0.8, 1.2, 1.4}) {
        EXPECT_NEAR(rate_I(1.0 - 0.5 * x * x, x), 0.0, 1e-15) << x;
    }
    EXPECT_THROW(rate_I(1.0, 1.0), DomainError);
    EXPECT_THROW(rate_I(0.4, 1.0), DomainError);
    EXPECT_THROW(rate_I(0.5, -1.0), DomainError);
    try {
        rate_I(0.4, 1.0);
    } catch (const DomainError& e) {
        EXPECT_EQ(e.bound(), "a >= (1 - x^2/2)^+");
    }
}

TEST(RateJ, ValuesAndIdentityWithI) {
    EXPECT_NEAR(rate_J(0.8, 0.6), 1.6, 1e-14);
    EXPECT_NEAR(rate_J(1.0 - 0.36, 0.6), 0.0, 1e-15);
    mc::Stream s(17);
    for (int i = 0; i < 100; ++i) {
        const GffRateQuery q = random_gff_query(s);
        const double j = rate_J(q.a, q.eta);
        EXPECT_NEAR(j, 2.0 * rate_I(q.a, std::sqrt(2.0) * q.eta), 1e-13 * (1.0 + j));
        EXPECT_NEAR(j, 2.0 * q.eta * q.eta / (1.0 - q.a) - 2.0, 1e-13 * (1.0 + j));
    }
    // J(a, eta) and 2 I(a, eta) differ wherever both are defined.
    EXPECT_NEAR(rate_J(0.9, 0.5) - 2.0 * rate_I(0.9, 0.5), 2.5, 1e-12);
    EXPECT_THROW(rate_J(0.5, 1.0), DomainError);
    EXPECT_THROW(rate_J(0.5, 0.5), DomainError);
}

TEST(RateI, StrictlyIncreasingInBothArguments) {
    const int n = 50;
    for (int i = 0; i < n; ++i) {
        const double x = 0.1 + 2.4 * i / (n - 1);
        const double lower = std::max(0.0, 1.0 - 0.5 * x * x);
        double prev = -1e300;
        for (int j = 0; j < n; ++j) {
            const double a = lower + (1.0 - lower) * (0.001 + 0.998 * j / (n - 1));
            const double v = rate_I(a, x);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
    for (int j = 0; j < n; ++j) {
        const double a = 0.5 + 0.49 * j / (n - 1);
        double prev = -1e300;
        for (int i = 0; i < n; ++i) {
            const double x = 1.0 + 1.5 * i / (n - 1);  // admissible for every a >= 0.5
            const double v = rate_I(a, x);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(BbmVariational, WorkedExample) {
    const VariationalSolution sol = solve_bbm_variational({1.0, 0.75, 1.0});
    EXPECT_NEAR(sol.maximizer[0], 1.0 / 7.0, 1e-15);
    EXPECT_NEAR(sol.maximizer[1], 4.0 / 7.0, 1e-15);
    EXPECT_NEAR(sol.value, -1.0, 1e-14);
    EXPECT_LT(std::abs(sol.constraint_residual), 1e-12);
}

TEST(BbmVariational, HomogeneousInHorizon) {
    const VariationalSolution one = solve_bbm_variational({1.3, 0.6, 1.0});
    const VariationalSolution two = solve_bbm_variational({1.3, 0.6, 2.0});
    EXPECT_NEAR(two.maximizer[0], 2.0 * one.maximizer[0], 1e-14);
    EXPECT_NEAR(two.maximizer[1], 2.0 * one.maximizer[1], 1e-14);
    EXPECT_NEAR(two.value / 2.0, one.value, 1e-14);
}

TEST(BbmVariational, BoundaryValueIsZero) {
    for (double x : {0.4, 1.0, 1.3}) {
        const VariationalSolution sol = solve_bbm_variational({x, 1.0 - 0.5 * x * x, 1.0});
        EXPECT_NEAR(sol.value, 0.0, 1e-15);
        EXPECT_NEAR(sol.constraint_residual, 0.0, 1e-15);
    }
}

TEST(BbmVariational, SubstitutionOracleOnRandomQueries) {
    mc::Stream s(3);
    for (int i = 0; i < 200; ++i) {
        BbmRateQuery q = random_bbm_query(s);
        q.t = 0.5 + 4.0 * s.uniform();
        const VariationalSolution sol = solve_bbm_variational(q);
        const double sv = sol.maximizer[0];
        const double yv = sol.maximizer[1];
        // Independent substitution into the constraint and objective.
        const double constraint = (q.t - sv) - (q.x * q.t - yv) * (q.x * q.t - yv) / (2.0 * (q.t - sv));
        EXPECT_LT(std::abs(constraint - q.a * q.t), 1e-9 * q.t);
        EXPECT_NEAR(sv - yv * yv / (2.0 * sv), -rate_I(q.a, q.x) * q.t, 1e-9 * q.t);
        EXPECT_GT(sv, 0.0);
        EXPECT_LT(sv, q.t);
        EXPECT_LE(yv, q.x * q.t);
    }
}

TEST(GffVariational, WorkedExample) {
    const VariationalSolution sol = solve_gff_variational({0.6, 0.8});
    EXPECT_NEAR(sol.maximizer[0], 0.9, 1e-14);
    EXPECT_NEAR(sol.maximizer[1], 0.3, 1e-14);
    EXPECT_DOUBLE_EQ(sol.maximizer[2], 0.6);
    EXPECT_NEAR(sol.value, -0.8, 1e-13);
    EXPECT_LT(std::abs(sol.constraint_residual), 1e-12);
    EXPECT_NEAR(sol.value, -rate_J(0.8, 0.6) / 2.0, 1e-13);
}

TEST(GffVariational, RandomQueriesMatchHalfJ) {
    mc::Stream s(4);
    for (int i = 0; i < 200; ++i) {
        const GffRateQuery q = random_gff_query(s);
        const VariationalSolution sol = solve_gff_variational(q);
        EXPECT_DOUBLE_EQ(sol.maximizer[2], q.eta);
        EXPECT_LT(std::abs(sol.constraint_residual), 1e-9);
        EXPECT_NEAR(sol.value, -(q.eta * q.eta / (1.0 - q.a) - 1.0), 1e-9);
        EXPECT_GT(sol.maximizer[0], 0.0);
        EXPECT_LT(sol.maximizer[0], 1.0);
    }
}

TEST(GridCertify, BbmWorkedExample) {
    const VariationalSolution cert = grid_certify(bbm_level_problem({1.0, 0.75, 1.0}), {64, 6, 0.25});
    EXPECT_NEAR(cert.value, -1.0, 1e-6);
    EXPECT_NEAR(cert.maximizer[0], 1.0 / 7.0, 1e-4);
    for (std::size_t k = 1; k < cert.level_values.size(); ++k) {
        EXPECT_GE(cert.level_values[k], cert.level_values[k - 1]);
    }
    EXPECT_GE(cert.constraint_residual, 0.0);
}

TEST(GridCertify, GffWorkedExample) {
    const VariationalSolution cert = grid_certify(gff_level_problem({0.6, 0.8}), {64, 6, 0.25});
    EXPECT_NEAR(cert.value, -0.8, 1e-6);
    EXPECT_NEAR(cert.maximizer[2], 0.6, 1e-6);
}

TEST(GridCertify, AgreesWithClosedFormsOnRandomQueries) {
    mc::Stream s(11);
    for (int i = 0; i < 100; ++i) {
        const BbmRateQuery q = random_bbm_query(s);
        const VariationalSolution cert = grid_certify(bbm_level_problem(q));
        EXPECT_NEAR(cert.value, -rate_I(q.a, q.x), 1e-6) << "x=" << q.x << " a=" << q.a;
    }
    for (int i = 0; i < 100; ++i) {
        const GffRateQuery q = random_gff_query(s);
        const VariationalSolution cert = grid_certify(gff_level_problem(q), {32, 6, 0.25});
        EXPECT_NEAR(cert.value, -rate_J(q.a, q.eta) / 2.0, 1e-6) << "eta=" << q.eta << " a=" << q.a;
    }
}

TEST(GridCertify, InfeasibleProblemIsReported) {
    ConstrainedSup p;
    p.name = "empty";
    p.lower = {0.0, 0.0};
    p.upper = {1.0, 1.0};
    p.objective = [](std::span<const double> v) { return v[0]; };
    p.constraint = [](std::span<const double> v) { return -1.0 - v[0] - v[1]; };
    EXPECT_THROW(grid_certify(p), InfeasibleError);
}

TEST(GaussianTailBound, ClosedFormCases) {
    EXPECT_DOUBLE_EQ(gaussian_tail_bound(0.0, 5.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(gaussian_tail_bound(3.0, 0.0, 1.0), std::exp(-4.5));
    EXPECT_THROW(gaussian_tail_bound(1.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(gaussian_tail_bound(1.0, -1.0, 1.0), DomainError);
}

TEST(GaussianTailBound, DominatesIntervalProbability) {
    mc::Stream s(21);
    for (int i = 0; i < 200; ++i) {
        const double var = 0.1 + 10.0 * s.uniform();
        const double x = 12.0 * (s.uniform() - 0.5);
        const double y = 3.0 * s.uniform();
        const double exact = interval_probability_by_quadrature(x, y, var);
        EXPECT_GE(gaussian_tail_bound(x, y, var), exact * (1.0 - 1e-9)) << x << " " << y << " " << var;
    }
}

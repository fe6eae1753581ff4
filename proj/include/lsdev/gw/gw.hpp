#pragma once

/**
 * Inhomogeneous Galton-Watson processes
 *
 *   Z_0 = ell,   Z_{i+1} = sum_{k=1}^{Z_i} nu_i^{(k)},
 *
 * together with the exceedance inequality
 *
 *   P(Z_n >= max{ell, (alpha+delta)^n ell max_i prod_{j>=i} m_j})
 *       <= n exp(-delta ell min_i lambda_i / (alpha+delta) + max_i lambda_i),
 *
 * valid whenever E exp(lambda_i nu_i) <= exp(alpha lambda_i m_i) for every i.
 *
 * Geometric laws live on {1, 2, ...}: P(k) = (1-p)^{k-1} p.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lsdev/mc/replicas.hpp"
#include "lsdev/mc/rng.hpp"

namespace lsdev::gw {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

enum class LawKind { deterministic, geometric, poisson, table };

std::string to_string(LawKind kind);

class OffspringLaw {
public:
    static OffspringLaw deterministic(std::uint64_t k);
    /// Support {1, 2, ...}, success probability p in (0, 1].
    static OffspringLaw geometric(double p);
    static OffspringLaw poisson(double mean);
    /// pmf[k] = P(nu = k). Must sum to 1 within 1e-12.
    static OffspringLaw table(std::vector<double> pmf);

    LawKind kind() const noexcept { return kind_; }
    double mean() const noexcept { return mean_; }
    /// k for deterministic, p for geometric, the mean for poisson, unused for table.
    double parameter() const noexcept { return param_; }
    const std::vector<double>& pmf() const noexcept { return pmf_; }

    /// Largest value in the support, if bounded.
    std::optional<std::uint64_t> max_support() const;

    /// Abscissa of convergence of the MGF (+inf when entire).
    double mgf_radius() const;

    /// log E exp(lambda nu). Throws DivergenceError at or beyond the radius.
    double log_mgf(double lambda) const;

    /// Sum of `count` independent copies.
    std::uint64_t sample_sum(std::uint64_t count, mc::Stream& rng) const;

    std::string describe() const;

private:
    OffspringLaw(LawKind kind, double param, double mean, std::vector<double> pmf)
        : kind_(kind), param_(param), mean_(mean), pmf_(std::move(pmf)) {}

    LawKind kind_;
    double param_;
    double mean_;
    std::vector<double> pmf_;
};

struct GwPlan {
    std::vector<OffspringLaw> laws;  ///< one law per generation 0..n-1
    std::uint64_t ell = 1;

    std::size_t n() const noexcept { return laws.size(); }
    std::vector<double> means() const;
};

/// Throws std::invalid_argument unless laws is nonempty and ell >= 1.
void validate(const GwPlan& plan);

struct MgfCheck {
    bool holds = false;
    /// alpha lambda m - log E exp(lambda nu); nonnegative iff the condition holds.
    double log_gap = 0.0;
    double log_mgf = 0.0;
};

MgfCheck verify_mgf_condition(const OffspringLaw& law, double lambda, double alpha);

/// Largest lambda for which the MGF condition holds (+inf for deterministic
/// laws). The log gap is concave in lambda and vanishes at 0, so the
/// admissible set is an interval [0, lambda*].
double max_admissible_lambda(const OffspringLaw& law, double alpha);

struct BSequence {
    std::vector<BigInt> values;  ///< b_0 .. b_n
    /// max{ell, (alpha+delta)^n ell max_i prod_{j=i}^{n-1} m_j}, exact.
    BigRational cap;
    bool within_cap = false;
};

/// Exact recursion b_{i+1} = max{floor((alpha+delta) m_i b_i), ell}. Doubles
/// are converted to rationals exactly, so no rounding enters.
BSequence b_sequence(double alpha, double delta, std::uint64_t ell, std::span<const double> means);

struct PropBoundQuery {
    double alpha = 1.5;
    double delta = 0.5;
    std::vector<double> lambdas;
    GwPlan plan;
};

struct PropBound {
    BigRational threshold_exact;
    double threshold = 0.0;
    /// ceil(threshold); Z_n >= threshold iff Z_n >= count_threshold.
    BigInt count_threshold;
    double raw_bound = 0.0;
    double bound = 0.0;  ///< raw_bound clamped to [0, 1]
};

/// Throws MgfConditionError naming the first generation whose (lambda, law)
/// pair fails the hypothesis.
PropBound prop_bound(const PropBoundQuery& q);

struct GwTrajectory {
    std::vector<std::uint64_t> z;  ///< Z_0 .. Z_n, shorter when censored
    bool censored = false;
};

struct SimulationOptions {
    std::uint64_t population_cap = std::uint64_t{1} << 40;
};

GwTrajectory simulate_gw(const GwPlan& plan, std::uint64_t seed, const SimulationOptions& opts = {});

/// Exact law of Z_n by convolution when every law has bounded support and
/// the reachable population stays below `max_population`.
std::optional<std::vector<double>> exact_distribution(const GwPlan& plan, std::uint64_t max_population = 1u << 14);

struct ExceedanceEstimate {
    mc::ProportionEstimate proportion;
    std::size_t censored = 0;  ///< counted as exceedances
    std::optional<double> exact;
};

ExceedanceEstimate empirical_exceedance(const GwPlan& plan, const BigInt& count_threshold,
                                        const mc::ReplicaPlan& replicas, const SimulationOptions& opts = {});

}  // namespace lsdev::gw

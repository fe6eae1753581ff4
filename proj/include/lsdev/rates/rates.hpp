#pragma once

/**
 * Rate functions for level sets of branching Brownian motion and the planar
 * discrete Gaussian free field, their variational characterisations, and an
 * independent grid-search certifier for the variational problems.
 *
 *   psi(x)    = x^2/2 - 1                        (maximum above speed x)
 *   I(a, x)   = x^2 / (2(1-a)) - 1               (BBM:  P(N(t,x) >= e^{at}))
 *   J(a, eta) = 2 eta^2 / (1-a) - 2 = 2 I(a, sqrt2 eta)  (DGFF: P(#H_N(eta) >= N^{2a}))
 *
 * All functions are pure and safe to call concurrently.
 */

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lsdev::rates {

struct BbmRateQuery {
    double x = 1.0;  ///< speed
    double a = 0.5;  ///< growth exponent
    double t = 1.0;  ///< horizon; the variational problem is 1-homogeneous in t
};

struct GffRateQuery {
    double eta = 0.5;  ///< level fraction
    double a = 0.9;    ///< area exponent
};

struct VariationalSolution {
    /// (s*, y*) for the BBM problem, (s*, b*, y*) for the DGFF problem.
    std::vector<double> maximizer;
    double value = 0.0;
    /// Constraint value minus its target at the maximizer (0 when active).
    double constraint_residual = 0.0;
    /// Best objective after each refinement level (grid_certify only).
    std::vector<double> level_values;
};

struct GridOracleConfig {
    int resolution = 64;
    int refinement_levels = 6;
    /// Relative enlargement of the search box along unbounded axes.
    double padding = 0.25;
    /// Number of best points whose windows are rescanned at each level.
    int candidates = 1;
};

/// A supremum of `objective` over a box subject to `constraint(p) >= 0`.
/// Either callable may return NaN to mark a point outside the natural domain.
struct ConstrainedSup {
    std::string name;
    std::vector<double> lower;
    std::vector<double> upper;
    std::function<double(std::span<const double>)> objective;
    std::function<double(std::span<const double>)> constraint;
};

double psi(double x);
double rate_I(double a, double x);
double rate_J(double a, double eta);

/// Throws DomainError unless x > 0 and (1 - x^2/2)^+ <= a < 1.
void validate(const BbmRateQuery& q);
/// Throws DomainError unless 0 < eta < 1 and 1 - eta^2 <= a < 1.
void validate(const GffRateQuery& q);

/// Closed-form maximizer of  sup { s - y^2/(2s) : (t-s) - (xt-y)^2/(2(t-s)) = at }.
/// Solved at t = 1 and scaled.
VariationalSolution solve_bbm_variational(const BbmRateQuery& q);

/// Closed-form maximizer of
///   sup { (1-s) - b^2/(1-s) : 0 < s < 1, y >= eta, s - (y-b)^2/s >= a }.
VariationalSolution solve_gff_variational(const GffRateQuery& q);

/// The BBM problem in its inequality form, with the free end point z >= xt
/// eliminated (z = max(xt, y)). Variables (s, y).
ConstrainedSup bbm_level_problem(const BbmRateQuery& q, double padding = 0.25);

/// The DGFF problem with variables (s, b, y).
ConstrainedSup gff_level_problem(const GffRateQuery& q, double padding = 0.25);

/// Exhaustive grid search with iterative refinement. Each level shrinks the
/// window tenfold around the incumbent and recentres it while the incumbent
/// improves. Lattice edges crossing the constraint boundary are bisected, so
/// active constraints are resolved to machine precision. Throws
/// InfeasibleError when no point of the first level is feasible.
VariationalSolution grid_certify(const ConstrainedSup& problem, const GridOracleConfig& cfg = {});

/// exp(-x^2/(2 var) + |x| y / var), an upper bound on P(|N - x| <= y) for
/// a centred Gaussian N of variance var.
double gaussian_tail_bound(double x, double y, double var);

}  // namespace lsdev::rates

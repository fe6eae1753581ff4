#pragma once

/**
 * Level sets H_N(eta) = {x : Phi(x) >= 2 gamma eta log N}, their exponent
 * log #H_N / log N, and the coarse exceedance probability
 * P(exists D in the flat partition at scale zeta : phi_D >= 2 gamma b log N).
 */

#include <cstddef>
#include <vector>

#include "lsdev/gff/green.hpp"
#include "lsdev/gff/grid.hpp"
#include "lsdev/mc/fit.hpp"
#include "lsdev/mc/replicas.hpp"

namespace lsdev::gff {

/// 2 gamma eta log N with gamma = sqrt(2/pi).
double level_threshold(int n, double eta);

struct LevelSet {
    double eta = 0.0;
    double threshold = 0.0;
    std::size_t count = 0;
    std::vector<Site> sites;  ///< row-major; empty unless requested
};

LevelSet level_set(const Field& field, double eta, bool collect_sites = true);

/// E #H_N(eta) = sum_x P(Z >= threshold / sqrt(G(x, x))) from the Green diagonal.
double expected_level_count(const GreenOperator& green, double eta);

struct DaviaudPoint {
    int n = 0;
    mc::Estimate exponent;  ///< of log(count)/log N over replicas with count > 0
    mc::Estimate count;     ///< of #H_N over all replicas
    bool low_confidence = false;  ///< zero counts in 50% or more of replicas
};

struct DaviaudSweep {
    double eta = 0.0;
    double limit = 0.0;  ///< 2 (1 - eta^2)
    std::vector<DaviaudPoint> points;
    /// OLS of mean log(count) against log N over N with data.
    mc::ExponentFit fit;
    bool increasing = false;  ///< per-N exponents strictly increase with N
};

/// Replicas for size N use master seed derive_seed(plan.master_seed, N).
DaviaudSweep estimate_daviaud_exponent(const std::vector<int>& ns, double eta, const mc::ReplicaPlan& plan);

/// 2 [(1 - zeta) - b^2/(1 - zeta)]: P(...) = N^{this + o(1)}.
double coarse_tail_exponent(double zeta, double b);

struct CoarseProbe {
    int n = 0;
    double zeta = 0.0;
    double b = 0.0;
    std::size_t boxes = 0;
    mc::ProportionEstimate probability;
    double decay = 0.0;            ///< -log p_hat / log N; +inf when p_hat = 0
    double predicted_decay = 0.0;  ///< -coarse_tail_exponent(zeta, b)
    double predicted_probability = 0.0;
};

/// Requires 0 <= zeta < 1 and b > 1 - zeta. Refuses with UnobservableError when
/// N^{coarse_tail_exponent} < 10 / replicas. Boxes tile V_N with side N^zeta;
/// at zeta = 0 the event is max Phi >= 2 gamma b log N.
CoarseProbe coarse_exceedance_probe(int n, double zeta, double b, const mc::ReplicaPlan& plan);

}  // namespace lsdev::gff

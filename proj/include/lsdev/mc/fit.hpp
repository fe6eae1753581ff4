#pragma once

#include <span>
#include <utility>
#include <vector>

namespace lsdev::mc {

/// Ordinary least-squares line through (abscissa, ordinate) points, e.g.
/// log N(t, x) against t or log #level-set against log N.
struct ExponentFit {
    std::vector<double> abscissae;
    std::vector<double> ordinates;
    double slope = 0.0;
    double intercept = 0.0;
    /// NaN when only two points are given (no residual degrees of freedom).
    double slope_stderr = 0.0;
    std::vector<double> residuals;
};

/// Throws std::invalid_argument when fewer than two distinct abscissae exist.
ExponentFit fit_exponent(std::span<const std::pair<double, double>> points);

}  // namespace lsdev::mc

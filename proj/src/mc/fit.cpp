#include "lsdev/mc/fit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lsdev::mc {

ExponentFit fit_exponent(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("exponent fit needs at least two points");

    ExponentFit fit;
    fit.abscissae.reserve(points.size());
    fit.ordinates.reserve(points.size());
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : points) {
        fit.abscissae.push_back(x);
        fit.ordinates.push_back(y);
        mx += x;
        my += y;
    }
    const auto n = static_cast<double>(points.size());
    mx /= n;
    my /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    // Relative test so that large abscissae with rounding noise still count as degenerate.
    if (!(sxx > 1e-14 * (1.0 + mx * mx) * n)) {
        throw std::invalid_argument("exponent fit needs at least two distinct abscissae");
    }

    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double rss = 0.0;
    fit.residuals.reserve(points.size());
    for (const auto& [x, y] : points) {
        const double r = y - (fit.intercept + fit.slope * x);
        fit.residuals.push_back(r);
        rss += r * r;
    }
    fit.slope_stderr = points.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx)
                                         : std::numeric_limits<double>::quiet_NaN();
    return fit;
}

}  // namespace lsdev::mc

#pragma once

#include <cmath>
#include <numbers>

namespace lsdev {

/// gamma = sqrt(2/pi); G_N(x, x) = gamma^2 log N + O(1) for the planar walk.
inline const double kGamma = std::sqrt(2.0 / std::numbers::pi);
inline const double kGammaSq = 2.0 / std::numbers::pi;

/// P(Z >= z) for a standard normal Z.
inline double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

/// log P(Z >= z), accurate far into the tail where erfc underflows.
inline double log_normal_upper_tail(double z) {
    if (z < 25.0) return std::log(normal_upper_tail(z));
    // Asymptotic series: Q(z) ~ phi(z)/z (1 - 1/z^2 + 3/z^4 - 15/z^6).
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
    return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

}  // namespace lsdev

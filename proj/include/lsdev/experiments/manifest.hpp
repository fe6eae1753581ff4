#pragma once

/**
 * Acceptance manifest: the configuration, tolerance and time budget of every
 * acceptance criterion. Experiment defaults and the acceptance runner both
 * read from here, so a tolerance is stated exactly once.
 */

#include <array>
#include <cstdint>
#include <string_view>

namespace lsdev::experiments::manifest {

struct Criterion {
    int id;
    std::string_view part;   ///< experiment part that implements it
    std::string_view title;
    double budget_seconds;
};

inline constexpr std::array<Criterion, 13> kCriteria{{
    {1, "rates", "rate-function certification", 10.0},
    {2, "gw-verify", "Galton-Watson bound never violated", 120.0},
    {3, "bbm-first-moment", "BBM first moment", 300.0},
    {4, "bbm-biggins", "level-set growth exponent", 600.0},
    {5, "bbm-max-ldp", "maximum large deviations", 900.0},
    {6, "nbbm", "N-BBM coupling dominance", 300.0},
    {7, "gff-cov", "DGFF sampler exactness", 300.0},
    {8, "green-growth", "Green's function growth", 120.0},
    {9, "daviaud", "level-set first moment and exponent trend", 1200.0},
    {10, "cover-check", "starred partitions and shift cover", 60.0},
    {11, "harmonic", "harmonic decomposition", 600.0},
    {12, "coarse-tail", "coarse exceedance probe", 1800.0},
    {13, "determinism", "byte-identical reports across concurrency", 0.0},
}};

// 1. grid_certify vs closed forms
inline constexpr int kRatesQueries = 100;
inline constexpr double kRatesValueTol = 1e-6;
inline constexpr double kRatesResidualTol = 1e-9;

// 2. Galton-Watson sweep
inline constexpr std::uint64_t kGwReplicas = 10'000;
inline constexpr int kGwConfigurations = 20;
inline constexpr double kGwStderrSlack = 2.0;  ///< p_hat - 2 se <= bound
inline constexpr double kGwExactSlack = 0.0;

// 3. BBM first moment
inline constexpr std::uint64_t kMomentReplicas = 10'000;
inline constexpr double kMomentPopulationTime = 5.0;
inline constexpr double kMomentLevelTime = 6.0;
inline constexpr std::array<double, 2> kMomentLevels{0.3, 0.8};
inline constexpr double kMomentSeTol = 3.0;

// 4. level-set exponent 1 - x^2/2
inline constexpr double kBigginsX = 0.5;
inline constexpr double kBigginsT = 12.0;
inline constexpr std::uint64_t kBigginsReplicas = 200;
inline constexpr double kBigginsTol = 0.10;

// 5. maximum large deviations psi(x) = x^2/2 - 1
inline constexpr double kLdpX = 1.6;
inline constexpr std::array<double, 3> kLdpTimes{4.0, 6.0, 8.0};
inline constexpr std::uint64_t kLdpReplicas = 20'000;
inline constexpr double kLdpTol = 0.25;

// 6. N-BBM dominance
inline constexpr std::uint64_t kNbbmSeeds = 1'000;
inline constexpr std::array<std::uint64_t, 2> kNbbmCaps{10, 100};
inline constexpr double kNbbmT = 6.0;

// 7. DGFF sampler
inline constexpr int kCovN = 32;
inline constexpr std::uint64_t kCovSamples = 20'000;
inline constexpr int kCovEntries = 200;
inline constexpr double kCovSeTol = 4.0;
inline constexpr double kKsLevel = 0.01;
inline constexpr std::uint64_t kKsSamples = 5'000;

// 8. Green growth, slope 2/pi
inline constexpr std::array<int, 4> kGreenSizes{32, 64, 128, 256};
inline constexpr double kGreenRelTol = 0.10;

// 9. level sets
inline constexpr double kDaviaudEta = 0.3;
inline constexpr int kDaviaudMomentN = 128;
inline constexpr std::uint64_t kDaviaudMomentReplicas = 2'000;
inline constexpr double kDaviaudMomentSeTol = 3.0;
inline constexpr std::array<int, 4> kDaviaudSizes{64, 128, 256, 512};
inline constexpr std::uint64_t kDaviaudReplicas = 200;
inline constexpr double kDaviaudTol = 0.30;

// 10. geometry
inline constexpr int kMarginN = 64;
inline constexpr std::array<int, 2> kCoverSizes{64, 256};
inline constexpr std::array<int, 2> kCoverLevels{1, 2};

// 11. harmonic decomposition
inline constexpr int kHarmonicN = 256;
inline constexpr std::uint64_t kHarmonicSamples = 2'000;
inline constexpr double kHarmonicResidualTol = 1e-10;
inline constexpr double kHarmonicCorrelationFactor = 4.0;  ///< |corr| < 4/sqrt(samples)
inline constexpr int kHarmonicCorrelationBox = 16;
inline constexpr double kHarmonicVarRelTol = 0.25;

// 12. coarse tail probe
inline constexpr double kProbeZeta = 0.0;
inline constexpr double kProbeB = 1.05;
inline constexpr std::array<int, 2> kProbeSizes{64, 128};
inline constexpr std::uint64_t kProbeReplicas = 100'000;
inline constexpr double kProbeTol = 0.15;

// schedule defaults
inline constexpr double kScheduleDelta = 0.9;
inline constexpr double kScheduleRho = 0.55;

}  // namespace lsdev::experiments::manifest

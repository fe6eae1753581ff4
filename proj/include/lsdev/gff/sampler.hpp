#pragma once

/**
 * Exact DGFF samples on V_N with zero boundary values.
 *
 * Spectral backend: the killed walk kernel on the interior square of side
 * n = N - 2 has eigenvectors sin(pi j a/(n+1)) sin(pi k b/(n+1)) with
 * eigenvalues (cos(pi j/(n+1)) + cos(pi k/(n+1)))/2. Independent normals
 * scaled by (1 - lambda)^{-1/2} are mapped back by a 2D type-I sine
 * transform (FFTW RODFT00).
 *
 * Dense backend: Cholesky factor of the interior Green's matrix, N <= 64.
 *
 * Both draw the same n^2 normals from Stream(seed) in row-major order.
 */

#include <cstdint>
#include <memory>

#include "lsdev/gff/grid.hpp"

namespace lsdev::gff {

enum class Backend { Spectral, Dense };

inline constexpr int kDenseMaxN = 64;

Field sample_field(int n, std::uint64_t seed, Backend backend = Backend::Spectral);

/// Reusable sampler; holds the eigenvalue scaling or the dense factor.
/// Thread-safe for concurrent sample() calls.
class FieldSampler {
public:
    FieldSampler(int n, Backend backend = Backend::Spectral);
    ~FieldSampler();
    FieldSampler(FieldSampler&&) noexcept;
    FieldSampler& operator=(FieldSampler&&) noexcept;

    int n() const { return n_; }
    Backend backend() const { return backend_; }
    Field sample(std::uint64_t seed) const;

private:
    struct Impl;
    int n_;
    Backend backend_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace lsdev::gff

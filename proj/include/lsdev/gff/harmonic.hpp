#pragma once

/**
 * Harmonic decomposition Phi = h_D + Phi^D on a box D: h_D is the discrete
 * harmonic extension of Phi restricted to the inner boundary of D, and
 * phi_D = h_D(x_D) is the coarse value of the field at D.
 */

#include <cstddef>
#include <vector>

#include "lsdev/gff/grid.hpp"
#include "lsdev/gff/partition.hpp"

namespace lsdev::gff {

inline constexpr double kDirichletTolerance = 1e-10;

/// Values on the sites of a box, row-major within the box.
struct BoxValues {
    Box box;
    std::vector<double> values;

    double operator()(Site s) const {
        return values[static_cast<std::size_t>(s.row - box.row0) * static_cast<std::size_t>(box.cols) +
                      static_cast<std::size_t>(s.col - box.col0)];
    }
};

struct HarmonicDecomposition {
    Box box;
    BoxValues h;         ///< harmonic extension h_D
    BoxValues residual;  ///< Phi^D = Phi - h_D, zero on the boundary of D
    double phi = 0.0;    ///< h_D(x_D)
    /// max |4 h(x) - sum of neighbours| over interior x of D.
    double residual_norm = 0.0;
};

/// Harmonic extension of `field` from the inner boundary of `box`. A box
/// without interior returns the field itself (a singleton gives phi_D = Phi(x)).
/// Factorizations are cached per (rows, cols) and shared across threads.
/// Throws std::runtime_error if the Laplace residual exceeds kDirichletTolerance
/// relative to the boundary data.
HarmonicDecomposition decompose(const Field& field, const Box& box);

/// phi_D for every box, one Dirichlet solve each.
std::vector<double> coarse_field(const Field& field, const std::vector<Box>& boxes);

/// phi_B^D = phi_B - h_D(x_B) for a parent D and a child B in ch(D).
struct Increment {
    std::size_t parent = 0;  ///< index into levels[level]
    std::size_t child = 0;   ///< index into levels[level + 1]
    double value = 0.0;
};

/// Increments from every D of `level` (0 <= level < depth) to its children.
std::vector<Increment> coarse_increments(const Field& field, const NestedPartitions& np, int level);

}  // namespace lsdev::gff

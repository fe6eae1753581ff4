#pragma once

#include <Eigen/Sparse>

namespace lsdev::gff {

/// Five-point Laplacian 4I - A on the interior of a rows x cols box, unknowns
/// numbered row-major over the (rows-2) x (cols-2) interior.
Eigen::SparseMatrix<double> dirichlet_laplacian(int rows, int cols);

}  // namespace lsdev::gff

#pragma once

/**
 * Green's function of simple random walk on V_N killed on the inner boundary:
 * G(x, y) = expected visits to y before absorption, i.e. G = (I - P)^{-1} on
 * the interior, P the walk kernel. Equivalently G = 4 L^{-1} with L the
 * five-point Dirichlet Laplacian.
 *
 * Two evaluation routes:
 *  - linear solve: sparse Cholesky factor of L, one back-substitution per
 *    requested column; columns are cached;
 *  - spectral: product-sine eigenbasis of P, used for the whole diagonal.
 */

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lsdev/gff/grid.hpp"

namespace lsdev::gff {

struct GreenValue {
    double value = 0.0;
    /// An argument lies on the boundary; the value is 0 by convention.
    bool boundary = false;
};

class GreenOperator {
public:
    explicit GreenOperator(int n, std::size_t column_cache = 64);
    ~GreenOperator();
    GreenOperator(const GreenOperator&) = delete;
    GreenOperator& operator=(const GreenOperator&) = delete;

    const Grid& grid() const { return grid_; }

    /// Linear-solve evaluation.
    GreenValue operator()(Site x, Site y) const;

    /// G(., y) on V_N (zero on the boundary).
    std::vector<double> column(Site y) const;

    /// G(x, x) for every site, spectral route, cached after the first call.
    const std::vector<double>& diagonal() const;

    /// G(x, y) from the eigen-expansion.
    double spectral_entry(Site x, Site y) const;

    /// Dense interior matrix G, rows/cols in Grid::interior_index order.
    /// Intended as an oracle for N <= 64.
    Eigen::MatrixXd dense_interior() const;

private:
    struct Factor;
    std::shared_ptr<const Factor> factor() const;

    Grid grid_;
    std::size_t column_cache_;
    mutable std::mutex mutex_;
    mutable std::shared_ptr<const Factor> factor_;
    mutable std::map<std::size_t, std::shared_ptr<const std::vector<double>>> columns_;
    mutable std::optional<std::vector<double>> diagonal_;
};

/// Green's function of a box D (killed on the inner boundary of D), as a
/// dense matrix over the interior sites of D in row-major order.
Eigen::MatrixXd box_green_matrix(int rows, int cols);

}  // namespace lsdev::gff

#include "lsdev/gff/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/SparseCholesky>

#include "laplacian.hpp"

namespace lsdev::gff {

namespace {

using Solver = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>;

std::shared_ptr<const Solver> solver_for(int rows, int cols) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const Solver>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{rows, cols}];
    if (!slot) {
        auto s = std::make_shared<Solver>(dirichlet_laplacian(rows, cols));
        if (s->info() != Eigen::Success) throw std::runtime_error("Dirichlet factorization failed");
        slot = std::move(s);
    }
    return slot;
}

BoxValues restrict(const Field& field, const Box& box) {
    BoxValues out{box, std::vector<double>(box.size())};
    std::size_t k = 0;
    for (int r = box.row0; r < box.row0 + box.rows; ++r) {
        for (int c = box.col0; c < box.col0 + box.cols; ++c) out.values[k++] = field.at(r, c);
    }
    return out;
}

}  // namespace

HarmonicDecomposition decompose(const Field& field, const Box& box) {
    if (box.rows < 1 || box.cols < 1 || !field.grid().box().contains(box)) {
        throw std::invalid_argument("box is not inside V_N");
    }
    HarmonicDecomposition out;
    out.box = box;
    out.h = restrict(field, box);
    out.residual = BoxValues{box, std::vector<double>(box.size(), 0.0)};

    const int ir = box.rows - 2;
    const int ic = box.cols - 2;
    if (ir >= 1 && ic >= 1) {
        auto at = [&](int i, int j) -> double& {
            return out.h.values[static_cast<std::size_t>(i) * box.cols + static_cast<std::size_t>(j)];
        };
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ir) * ic);
        double scale = 0.0;
        for (int i = 1; i <= ir; ++i) {
            for (int j = 1; j <= ic; ++j) {
                double b = 0.0;
                if (i == 1) b += at(0, j);
                if (i == ir) b += at(ir + 1, j);
                if (j == 1) b += at(i, 0);
                if (j == ic) b += at(i, ic + 1);
                rhs[static_cast<Eigen::Index>(i - 1) * ic + (j - 1)] = b;
            }
        }
        for (int i = 0; i < box.rows; ++i) {
            for (int j = 0; j < box.cols; ++j) {
                if (box.on_boundary({box.row0 + i, box.col0 + j})) scale = std::max(scale, std::abs(at(i, j)));
            }
        }
        const Eigen::VectorXd u = solver_for(box.rows, box.cols)->solve(rhs);
        for (int i = 1; i <= ir; ++i) {
            for (int j = 1; j <= ic; ++j) at(i, j) = u[static_cast<Eigen::Index>(i - 1) * ic + (j - 1)];
        }
        for (int i = 1; i <= ir; ++i) {
            for (int j = 1; j <= ic; ++j) {
                const double r = 4.0 * at(i, j) - at(i - 1, j) - at(i + 1, j) - at(i, j - 1) - at(i, j + 1);
                out.residual_norm = std::max(out.residual_norm, std::abs(r));
            }
        }
        if (!(out.residual_norm <= kDirichletTolerance * std::max(1.0, scale))) {
            throw std::runtime_error("Dirichlet residual " + std::to_string(out.residual_norm) + " exceeds tolerance");
        }
        std::size_t k = 0;
        for (int r = box.row0; r < box.row0 + box.rows; ++r) {
            for (int c = box.col0; c < box.col0 + box.cols; ++c, ++k) {
                out.residual.values[k] = field.at(r, c) - out.h.values[k];
            }
        }
    }
    out.phi = out.h(box.centre());
    return out;
}

std::vector<double> coarse_field(const Field& field, const std::vector<Box>& boxes) {
    std::vector<double> out;
    out.reserve(boxes.size());
    for (const Box& b : boxes) out.push_back(decompose(field, b).phi);
    return out;
}

std::vector<Increment> coarse_increments(const Field& field, const NestedPartitions& np, int level) {
    if (level < 0 || level >= np.depth()) throw std::out_of_range("increment level must be in [0, L)");
    std::vector<Increment> out;
    const auto& parents = np.levels[static_cast<std::size_t>(level)];
    const auto& kids = np.levels[static_cast<std::size_t>(level) + 1];
    for (std::size_t d = 0; d < parents.size(); ++d) {
        const HarmonicDecomposition dec = decompose(field, parents[d]);
        for (std::size_t b : np.ch(level, d)) {
            const Box& child = kids[b];
            const double phi_b = decompose(field, child).phi;
            out.push_back({d, b, phi_b - dec.h(child.centre())});
        }
    }
    return out;
}

}  // namespace lsdev::gff

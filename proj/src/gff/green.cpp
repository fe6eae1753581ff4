#include "lsdev/gff/green.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "laplacian.hpp"

namespace lsdev::gff {

struct GreenOperator::Factor {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

GreenOperator::GreenOperator(int n, std::size_t column_cache) : grid_(n), column_cache_(column_cache) {}

GreenOperator::~GreenOperator() = default;

std::shared_ptr<const GreenOperator::Factor> GreenOperator::factor() const {
    std::lock_guard lock(mutex_);
    if (!factor_) {
        auto f = std::make_shared<Factor>();
        f->llt.compute(dirichlet_laplacian(grid_.n(), grid_.n()));
        if (f->llt.info() != Eigen::Success) throw std::runtime_error("Laplacian factorization failed");
        factor_ = std::move(f);
    }
    return factor_;
}

std::vector<double> GreenOperator::column(Site y) const {
    std::vector<double> out(grid_.sites(), 0.0);
    if (!grid_.interior(y)) return out;
    const std::size_t key = grid_.index(y);
    std::shared_ptr<const std::vector<double>> cached;
    {
        std::lock_guard lock(mutex_);
        if (auto it = columns_.find(key); it != columns_.end()) cached = it->second;
    }
    if (!cached) {
        const auto f = factor();
        const int m = grid_.n() - 2;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m) * m);
        rhs[static_cast<Eigen::Index>(grid_.interior_index(y))] = 4.0;
        const Eigen::VectorXd g = f->llt.solve(rhs);
        auto col = std::make_shared<std::vector<double>>(grid_.sites(), 0.0);
        for (int r = 2; r < grid_.n(); ++r) {
            for (int c = 2; c < grid_.n(); ++c) {
                (*col)[grid_.index({r, c})] = g[static_cast<Eigen::Index>(grid_.interior_index({r, c}))];
            }
        }
        std::lock_guard lock(mutex_);
        if (columns_.size() >= column_cache_) columns_.clear();
        columns_.emplace(key, col);
        cached = col;
    }
    out = *cached;
    return out;
}

GreenValue GreenOperator::operator()(Site x, Site y) const {
    if (!grid_.contains(x) || !grid_.contains(y)) throw std::out_of_range("site outside V_N");
    if (!grid_.interior(x) || !grid_.interior(y)) return {0.0, true};
    return {column(y)[grid_.index(x)], false};
}

namespace {

// w_jk = 1/(1 - lambda_jk) with lambda_jk = (cos(pi j/(m+1)) + cos(pi k/(m+1)))/2.
Eigen::MatrixXd inverse_gaps(int m) {
    Eigen::VectorXd c(m);
    for (int j = 0; j < m; ++j) c[j] = std::cos(std::numbers::pi * (j + 1) / (m + 1));
    Eigen::MatrixXd w(m, m);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) w(j, k) = 1.0 / (1.0 - 0.5 * (c[j] + c[k]));
    }
    return w;
}

}  // namespace

const std::vector<double>& GreenOperator::diagonal() const {
    std::lock_guard lock(mutex_);
    if (diagonal_) return *diagonal_;
    const int m = grid_.n() - 2;
    // sq(j, a) = sin^2(pi (j+1)(a+1)/(m+1))
    Eigen::MatrixXd sq(m, m);
    for (int j = 0; j < m; ++j) {
        for (int a = 0; a < m; ++a) {
            const double s = std::sin(std::numbers::pi * (j + 1) * (a + 1) / (m + 1));
            sq(j, a) = s * s;
        }
    }
    const Eigen::MatrixXd inner = inverse_gaps(m) * sq;
    const Eigen::MatrixXd diag = (sq.transpose() * inner) * (4.0 / ((m + 1.0) * (m + 1.0)));
    std::vector<double> out(grid_.sites(), 0.0);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) out[grid_.index({a + 2, b + 2})] = diag(a, b);
    }
    diagonal_ = std::move(out);
    return *diagonal_;
}

double GreenOperator::spectral_entry(Site x, Site y) const {
    if (!grid_.interior(x) || !grid_.interior(y)) return 0.0;
    const int m = grid_.n() - 2;
    const double h = std::numbers::pi / (m + 1);
    double sum = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double sr = std::sin(h * j * (x.row - 1)) * std::sin(h * j * (y.row - 1));
        const double cj = std::cos(h * j);
        for (int k = 1; k <= m; ++k) {
            const double sc = std::sin(h * k * (x.col - 1)) * std::sin(h * k * (y.col - 1));
            sum += sr * sc / (1.0 - 0.5 * (cj + std::cos(h * k)));
        }
    }
    return sum * 4.0 / ((m + 1.0) * (m + 1.0));
}

Eigen::MatrixXd GreenOperator::dense_interior() const { return box_green_matrix(grid_.n(), grid_.n()); }

Eigen::MatrixXd box_green_matrix(int rows, int cols) {
    if (rows < 3 || cols < 3) return Eigen::MatrixXd(0, 0);
    const Eigen::MatrixXd lap(dirichlet_laplacian(rows, cols));
    const Eigen::Index size = lap.rows();
    return 4.0 * lap.llt().solve(Eigen::MatrixXd::Identity(size, size));
}

}  // namespace lsdev::gff

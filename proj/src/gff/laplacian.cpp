#include "laplacian.hpp"

#include <vector>

namespace lsdev::gff {

Eigen::SparseMatrix<double> dirichlet_laplacian(int rows, int cols) {
    const int r = rows - 2;
    const int c = cols - 2;
    const Eigen::Index size = static_cast<Eigen::Index>(r) * c;
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(size) * 5);
    auto id = [c](int i, int j) { return static_cast<Eigen::Index>(i) * c + j; };
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
            entries.emplace_back(id(i, j), id(i, j), 4.0);
            if (i > 0) entries.emplace_back(id(i, j), id(i - 1, j), -1.0);
            if (i + 1 < r) entries.emplace_back(id(i, j), id(i + 1, j), -1.0);
            if (j > 0) entries.emplace_back(id(i, j), id(i, j - 1), -1.0);
            if (j + 1 < c) entries.emplace_back(id(i, j), id(i, j + 1), -1.0);
        }
    }
    Eigen::SparseMatrix<double> lap(size, size);
    lap.setFromTriplets(entries.begin(), entries.end());
    return lap;
}

}  // namespace lsdev::gff

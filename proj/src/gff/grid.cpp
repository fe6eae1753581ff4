#include "lsdev/gff/grid.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace lsdev::gff {

int Box::boundary_distance(Site s) const {
    return std::min({s.row - row0, row0 + rows - 1 - s.row, s.col - col0, col0 + cols - 1 - s.col});
}

int Box::boundary_distance(const Box& inner) const {
    return std::min({inner.row0 - row0, row0 + rows - inner.row0 - inner.rows, inner.col0 - col0,
                     col0 + cols - inner.col0 - inner.cols});
}

Grid::Grid(int n) : n_(n) {
    if (n < 4) throw std::invalid_argument("grid side must be >= 4, got " + std::to_string(n));
}

Box Grid::core() const {
    const int margin = (3 * n_ + 7) / 8;  // ceil(3N/8)
    const int side = n_ - 2 * margin;
    if (side < 1) throw std::invalid_argument("V*_N is empty for N = " + std::to_string(n_));
    return {1 + margin, 1 + margin, side, side};
}

double Field::max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::max(m, v);
    return m;
}

}  // namespace lsdev::gff

#pragma once

/**
 * Lattice square V_N = {1..N}^2 with its inner boundary, fields on it and
 * axis-aligned boxes. Sites are (row, col), both 1-based; storage is
 * row-major.
 */

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lsdev::gff {

struct Site {
    int row = 0;
    int col = 0;

    friend bool operator==(const Site&, const Site&) = default;
};

/// Closed rectangle of sites [row0, row0 + rows) x [col0, col0 + cols).
struct Box {
    int row0 = 1;
    int col0 = 1;
    int rows = 1;
    int cols = 1;
    /// Enlarged to absorb a tiling remainder; never used as a starred box.
    bool padded = false;

    int side() const { return rows < cols ? rows : cols; }
    bool is_square() const { return rows == cols; }
    bool contains(Site s) const {
        return s.row >= row0 && s.row < row0 + rows && s.col >= col0 && s.col < col0 + cols;
    }
    bool contains(const Box& b) const {
        return b.row0 >= row0 && b.col0 >= col0 && b.row0 + b.rows <= row0 + rows && b.col0 + b.cols <= col0 + cols;
    }
    /// Lower-left of the central sites when a side is even.
    Site centre() const { return {row0 + (rows - 1) / 2, col0 + (cols - 1) / 2}; }
    bool on_boundary(Site s) const {
        return s.row == row0 || s.col == col0 || s.row == row0 + rows - 1 || s.col == col0 + cols - 1;
    }
    /// Lattice distance from s (inside the box) to the box's inner boundary.
    int boundary_distance(Site s) const;
    /// min over sites of `inner` of boundary_distance; `inner` must lie inside.
    int boundary_distance(const Box& inner) const;
    std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }

    friend bool operator==(const Box& a, const Box& b) {
        return a.row0 == b.row0 && a.col0 == b.col0 && a.rows == b.rows && a.cols == b.cols;
    }
};

class Grid {
public:
    explicit Grid(int n);

    int n() const { return n_; }
    std::size_t sites() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
    Box box() const { return {1, 1, n_, n_}; }

    bool contains(Site s) const { return s.row >= 1 && s.col >= 1 && s.row <= n_ && s.col <= n_; }
    bool on_boundary(Site s) const { return box().on_boundary(s); }
    bool interior(Site s) const { return contains(s) && !on_boundary(s); }
    int boundary_distance(Site s) const { return box().boundary_distance(s); }

    /// V*_N = {x : dist(x, boundary) >= 3N/8}, a square of side N - 2 ceil(3N/8).
    Box core() const;

    std::size_t index(Site s) const {
        return static_cast<std::size_t>(s.row - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(s.col - 1);
    }
    Site site(std::size_t index) const {
        return {static_cast<int>(index / static_cast<std::size_t>(n_)) + 1,
                static_cast<int>(index % static_cast<std::size_t>(n_)) + 1};
    }

    /// Interior sites are numbered row-major over (row, col) in [2, N-1]^2.
    std::size_t interior_index(Site s) const {
        return static_cast<std::size_t>(s.row - 2) * static_cast<std::size_t>(n_ - 2) +
               static_cast<std::size_t>(s.col - 2);
    }

private:
    int n_;
};

/// Real values on V_N, zero on the inner boundary by construction of the samplers.
class Field {
public:
    explicit Field(int n) : grid_(n), values_(grid_.sites(), 0.0) {}

    const Grid& grid() const { return grid_; }
    int n() const { return grid_.n(); }

    double& operator()(Site s) { return values_[grid_.index(s)]; }
    double operator()(Site s) const { return values_[grid_.index(s)]; }
    double& at(int row, int col) { return (*this)(Site{row, col}); }
    double at(int row, int col) const { return (*this)(Site{row, col}); }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double max() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

}  // namespace lsdev::gff

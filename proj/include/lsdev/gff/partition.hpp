#pragma once

/**
 * Box partitions of V_N and V*_N, the starred hierarchy built by the 3/8
 * margin rule, and lattice shifts whose translates of the finest starred
 * level cover V*_N.
 *
 * Side lengths base^s are rounded to the nearest integer >= 1. A tiling
 * remainder is absorbed by the last box of each row and column; such boxes
 * are flagged `padded` and never enter the starred hierarchy.
 */

#include <cstddef>
#include <optional>
#include <vector>

#include "lsdev/gff/grid.hpp"

namespace lsdev::gff {

struct Schedule {
    double delta = 0.9;  ///< 5/6 < delta < 1
    double rho = 0.55;   ///< 1/2 < rho < 3/2 - delta
    int levels = 1;      ///< L
    std::vector<double> s;  ///< s_0 = 1 > s_1 > ... > s_L = 0, equally spaced

    double step() const { return 1.0 / levels; }
};

/// L = max(1, round((log N)^{1 - delta})) unless `levels` > 0 forces it.
Schedule make_schedule(int n, double delta = 0.9, int levels = 0, double rho = 0.55);

void validate(const Schedule& schedule);

enum class Base {
    Core,  ///< tiles V*_N with side (side of V*_N)^s
    Full,  ///< tiles V_N with side N^s
};

int box_side(int base_side, double s);

/// Exact tiling of `region` by squares of side `side` (remainder absorbed).
std::vector<Box> tile(const Box& region, int side);

/// Tiling of V*_N (Base::Core) or V_N (Base::Full) at scale s.
std::vector<Box> flat_partition(int n, double s, Base base);

struct NestedPartitions {
    int n = 0;
    Schedule schedule;
    std::vector<int> sides;                        ///< per level
    std::vector<std::vector<Box>> levels;          ///< levels[0] = {V*_N}
    std::vector<std::vector<std::size_t>> parent;  ///< into levels[i-1]; empty at i = 0
    std::vector<std::vector<std::vector<std::size_t>>> children;  ///< ch(D), into levels[i+1]

    int depth() const { return static_cast<int>(levels.size()) - 1; }
    const std::vector<std::size_t>& ch(int level, std::size_t k) const { return children.at(level).at(k); }
};

/// Starred boxes at level i are the unpadded boxes B of the level-i tiling of
/// V*_N lying in a starred D of level i-1 with dist(B, boundary of D) >= 3|D|/8.
/// Throws EmptyLevelError naming the first level without boxes.
NestedPartitions build_partitions(int n, const Schedule& schedule);

/// True when every starred box of level i >= 1 keeps the margin from its parent.
bool margin_rule_holds(const NestedPartitions& np);

enum class CoverMethod {
    /// Per level, ceil(P/w) offsets per axis: P the parent side, w the width of
    /// the union of kept children. Composed across levels.
    Hierarchical,
    /// Two offsets per axis per level (4 shifts per level).
    TwoPerAxis,
};

struct ShiftCover {
    CoverMethod method = CoverMethod::Hierarchical;
    std::vector<std::vector<int>> axis_offsets;  ///< per level
    std::vector<Site> shifts;                    ///< (row shift, col shift)
    int max_norm = 0;                            ///< sup-norm over shifts
    std::size_t target_sites = 0;                ///< |V*_N|
    std::size_t covered_sites = 0;
    std::optional<Site> uncovered;               ///< first uncovered site, row-major
};

/// Builds the shifts and checks coverage of V*_N point by point. Throws
/// CoverageError with the first uncovered site unless `allow_gaps`.
ShiftCover shift_cover(const NestedPartitions& np, CoverMethod method = CoverMethod::Hierarchical,
                       bool allow_gaps = false);

/// Sites of V*_N not covered by the translates of the finest starred level.
std::size_t count_uncovered(const NestedPartitions& np, const std::vector<Site>& shifts,
                            std::optional<Site>* first = nullptr);

}  // namespace lsdev::gff

#include "lsdev/gff/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lsdev/errors.hpp"

namespace lsdev::gff {

void validate(const Schedule& schedule) {
    if (!(schedule.delta > 5.0 / 6.0 && schedule.delta < 1.0)) {
        throw DomainError("5/6 < delta < 1", "schedule delta = " + std::to_string(schedule.delta));
    }
    if (!(schedule.rho > 0.5 && schedule.rho < 1.5 - schedule.delta)) {
        throw DomainError("1/2 < rho < 3/2 - delta", "schedule rho = " + std::to_string(schedule.rho));
    }
    if (schedule.levels < 1) throw DomainError("L >= 1", "schedule needs at least one level");
    if (schedule.s.size() != static_cast<std::size_t>(schedule.levels) + 1 || schedule.s.front() != 1.0 ||
        schedule.s.back() != 0.0) {
        throw std::invalid_argument("schedule s must run from s_0 = 1 to s_L = 0");
    }
    for (std::size_t i = 1; i < schedule.s.size(); ++i) {
        if (!(schedule.s[i] < schedule.s[i - 1])) throw std::invalid_argument("schedule s must decrease");
    }
}

Schedule make_schedule(int n, double delta, int levels, double rho) {
    if (n < 4) throw std::invalid_argument("grid side must be >= 4");
    Schedule out;
    out.delta = delta;
    out.rho = rho;
    out.levels = levels > 0 ? levels
                            : std::max(1, static_cast<int>(std::lround(std::pow(std::log(n), 1.0 - delta))));
    out.s.resize(static_cast<std::size_t>(out.levels) + 1);
    for (int i = 0; i <= out.levels; ++i) out.s[static_cast<std::size_t>(i)] = 1.0 - static_cast<double>(i) / out.levels;
    out.s.back() = 0.0;
    validate(out);
    return out;
}

int box_side(int base_side, double s) {
    return std::max(1, static_cast<int>(std::lround(std::pow(static_cast<double>(base_side), s))));
}

std::vector<Box> tile(const Box& region, int side) {
    if (side < 1) throw std::invalid_argument("tile side must be >= 1");
    const int kr = std::max(1, region.rows / side);
    const int kc = std::max(1, region.cols / side);
    std::vector<Box> out;
    out.reserve(static_cast<std::size_t>(kr) * kc);
    for (int i = 0; i < kr; ++i) {
        const int rows = i + 1 < kr ? side : region.rows - (kr - 1) * side;
        for (int j = 0; j < kc; ++j) {
            const int cols = j + 1 < kc ? side : region.cols - (kc - 1) * side;
            out.push_back({region.row0 + i * side, region.col0 + j * side, rows, cols, rows != side || cols != side});
        }
    }
    return out;
}

std::vector<Box> flat_partition(int n, double s, Base base) {
    const Grid grid(n);
    const Box region = base == Base::Core ? grid.core() : grid.box();
    return tile(region, box_side(region.rows, s));
}

NestedPartitions build_partitions(int n, const Schedule& schedule) {
    validate(schedule);
    const Grid grid(n);
    const Box core = grid.core();
    NestedPartitions np;
    np.n = n;
    np.schedule = schedule;
    np.sides.push_back(core.rows);
    np.levels.push_back({core});
    np.parent.emplace_back();

    // owner[k] = index of the starred box of the previous level holding core site k, or -1
    std::vector<long> owner(core.size(), 0);
    auto local = [&](int r, int c) {
        return static_cast<std::size_t>(r - core.row0) * static_cast<std::size_t>(core.cols) +
               static_cast<std::size_t>(c - core.col0);
    };
    for (int i = 1; i <= schedule.levels; ++i) {
        const int side = box_side(core.rows, schedule.s[static_cast<std::size_t>(i)]);
        const auto& prev = np.levels.back();
        std::vector<Box> kept;
        std::vector<std::size_t> parents;
        for (const Box& b : tile(core, side)) {
            if (b.padded) continue;
            const long p = owner[local(b.row0, b.col0)];
            if (p < 0) continue;
            const Box& d = prev[static_cast<std::size_t>(p)];
            if (!d.contains(b)) continue;
            if (8 * d.boundary_distance(b) < 3 * d.side()) continue;
            kept.push_back(b);
            parents.push_back(static_cast<std::size_t>(p));
        }
        if (kept.empty()) {
            std::ostringstream msg;
            msg << "starred level " << i << " of " << schedule.levels << " is empty at N = " << n << " (box side "
                << side << ", parent side " << np.sides.back() << ")";
            throw EmptyLevelError(i, msg.str());
        }
        auto& ch = np.children.emplace_back(prev.size());
        for (std::size_t k = 0; k < kept.size(); ++k) ch[parents[k]].push_back(k);
        std::fill(owner.begin(), owner.end(), -1);
        for (std::size_t k = 0; k < kept.size(); ++k) {
            const Box& b = kept[k];
            for (int r = b.row0; r < b.row0 + b.rows; ++r) {
                for (int c = b.col0; c < b.col0 + b.cols; ++c) owner[local(r, c)] = static_cast<long>(k);
            }
        }
        np.sides.push_back(side);
        np.levels.push_back(std::move(kept));
        np.parent.push_back(std::move(parents));
    }
    np.children.emplace_back(np.levels.back().size());
    return np;
}

bool margin_rule_holds(const NestedPartitions& np) {
    for (std::size_t i = 1; i < np.levels.size(); ++i) {
        for (std::size_t k = 0; k < np.levels[i].size(); ++k) {
            const Box& b = np.levels[i][k];
            const Box& d = np.levels[i - 1][np.parent[i][k]];
            if (!d.contains(b) || 8 * d.boundary_distance(b) < 3 * d.side()) return false;
        }
    }
    return true;
}

std::size_t count_uncovered(const NestedPartitions& np, const std::vector<Site>& shifts, std::optional<Site>* first) {
    const Box core = np.levels.front().front();
    std::vector<char> hit(core.size(), 0);
    for (const Site& z : shifts) {
        for (const Box& f : np.levels.back()) {
            for (int r = f.row0; r < f.row0 + f.rows; ++r) {
                for (int c = f.col0; c < f.col0 + f.cols; ++c) {
                    const Site s{r + z.row, c + z.col};
                    if (!core.contains(s)) continue;
                    hit[static_cast<std::size_t>(s.row - core.row0) * core.cols + (s.col - core.col0)] = 1;
                }
            }
        }
    }
    std::size_t missing = 0;
    for (std::size_t k = 0; k < hit.size(); ++k) {
        if (hit[k]) continue;
        if (missing == 0 && first != nullptr) {
            *first = Site{core.row0 + static_cast<int>(k / core.cols), core.col0 + static_cast<int>(k % core.cols)};
        }
        ++missing;
    }
    return missing;
}

ShiftCover shift_cover(const NestedPartitions& np, CoverMethod method, bool allow_gaps) {
    ShiftCover out;
    out.method = method;
    std::vector<int> composed{0};
    for (int i = 1; i <= np.depth(); ++i) {
        const Box& d = np.levels[static_cast<std::size_t>(i) - 1].front();
        int lo = d.rows;
        int hi = -1;
        for (std::size_t k : np.ch(i - 1, 0)) {
            const Box& b = np.levels[static_cast<std::size_t>(i)][k];
            lo = std::min(lo, b.row0 - d.row0);
            hi = std::max(hi, b.row0 + b.rows - 1 - d.row0);
        }
        const int p = d.rows;
        const int w = hi - lo + 1;
        std::vector<int> offsets;
        if (method == CoverMethod::TwoPerAxis) {
            offsets = {-lo, p - 1 - hi};
        } else {
            const int k = (p + w - 1) / w;
            for (int j = 0; j < k; ++j) offsets.push_back(std::min(-lo + j * w, p - 1 - hi));
        }
        std::sort(offsets.begin(), offsets.end());
        offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
        out.axis_offsets.push_back(offsets);

        std::vector<int> next;
        for (int base : composed) {
            for (int o : offsets) next.push_back(base + o);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        composed = std::move(next);
    }
    for (int r : composed) {
        for (int c : composed) {
            out.shifts.push_back({r, c});
            out.max_norm = std::max({out.max_norm, std::abs(r), std::abs(c)});
        }
    }
    const Box core = np.levels.front().front();
    out.target_sites = core.size();
    const std::size_t missing = count_uncovered(np, out.shifts, &out.uncovered);
    out.covered_sites = out.target_sites - missing;
    if (missing > 0 && !allow_gaps) {
        std::ostringstream msg;
        msg << "shift cover misses " << missing << " of " << out.target_sites << " sites of V*_N; first ("
            << out.uncovered->row << ", " << out.uncovered->col << ")";
        throw CoverageError(out.uncovered->row, out.uncovered->col, msg.str());
    }
    return out;
}

}  // namespace lsdev::gff

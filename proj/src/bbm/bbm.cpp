#include "lsdev/bbm/bbm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

#include "lsdev/errors.hpp"
#include "lsdev/mc/rng.hpp"
#include "lsdev/numerics.hpp"

namespace lsdev::bbm {

namespace {

constexpr std::uint32_t kNoSlot = std::numeric_limits<std::uint32_t>::max();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Node {
    double birth;
    double death;
    double pos;
    double pos_time;
    std::uint64_t parent;
    std::uint32_t next_block;
    std::uint32_t alive_slot;
    std::uint32_t survivor_slot;
    bool culled;
};

// Swap-remove set of node ids with per-node slot bookkeeping.
class IdSet {
public:
    explicit IdSet(std::uint32_t Node::*slot) : slot_(slot) {}

    void insert(std::vector<Node>& nodes, std::uint64_t id) {
        nodes[id].*slot_ = static_cast<std::uint32_t>(ids_.size());
        ids_.push_back(id);
    }

    void erase(std::vector<Node>& nodes, std::uint64_t id) {
        const std::uint32_t s = nodes[id].*slot_;
        const std::uint64_t last = ids_.back();
        ids_[s] = last;
        nodes[last].*slot_ = s;
        ids_.pop_back();
        nodes[id].*slot_ = kNoSlot;
    }

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::uint64_t>& ids() const { return ids_; }

private:
    std::uint32_t Node::*slot_;
    std::vector<std::uint64_t> ids_;
};

class Engine {
public:
    Engine(const BbmRunConfig& cfg, std::uint64_t cap_n)
        : cfg_(cfg), cap_n_(cap_n), alive_(&Node::alive_slot), survivors_(&Node::survivor_slot) {}

    NbbmRun run() {
        std::vector<double> times = cfg_.snapshot_times;
        times.push_back(cfg_.t_end);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());

        spawn(kRoot, 0.0, 0.0, false);

        NbbmRun out;
        for (double s : times) {
            while (!queue_.empty() && queue_.top().first <= s) {
                const auto [when, id] = queue_.top();
                queue_.pop();
                branch(id, when);
            }
            out.snapshots.push_back(take_snapshot(s, out.snapshots));
            double all = kNegInf;
            double kept = kNegInf;
            for (const SnapshotParticle& p : out.snapshots.back().particles) {
                all = std::max(all, p.position);
                if (!p.culled) kept = std::max(kept, p.position);
            }
            out.bbm_max.push_back(all);
            out.nbbm_max.push_back(kept);
        }
        out.culls = culls_;
        return out;
    }

private:
    static constexpr std::uint64_t kRoot = std::numeric_limits<std::uint64_t>::max();

    bool tracking() const { return cap_n_ != kNoCap; }

    std::uint64_t key(std::uint64_t id) const { return mc::derive_seed(cfg_.seed, id); }

    void spawn(std::uint64_t parent, double time, double pos, bool culled) {
        const std::uint64_t id = nodes_.size();
        mc::Stream life(key(id), 0);
        nodes_.push_back(Node{time, time + life.exponential(), pos, time, parent, 1, kNoSlot, kNoSlot, culled});
        queue_.emplace(nodes_[id].death, id);
        alive_.insert(nodes_, id);
        if (tracking() && !culled) survivors_.insert(nodes_, id);
    }

    void advance(std::uint64_t id, double time) {
        Node& n = nodes_[id];
        if (!(time > n.pos_time)) return;
        mc::Stream s(key(id), n.next_block++);
        n.pos += std::sqrt(time - n.pos_time) * s.normal();
        n.pos_time = time;
    }

    void branch(std::uint64_t id, double time) {
        advance(id, time);
        alive_.erase(nodes_, id);
        const bool culled = nodes_[id].culled;
        if (tracking() && !culled) survivors_.erase(nodes_, id);
        const double pos = nodes_[id].pos;
        spawn(id, time, pos, culled);
        spawn(id, time, pos, culled);
        if (alive_.size() > cfg_.particle_cap) {
            throw TruncationError(time, "BBM population exceeded particle cap " + std::to_string(cfg_.particle_cap) +
                                            " at time " + std::to_string(time));
        }
        while (tracking() && survivors_.size() > cap_n_) cull(time);
    }

    void cull(double time) {
        std::uint64_t victim = kRoot;
        for (std::uint64_t id : survivors_.ids()) {
            advance(id, time);
            if (victim == kRoot) {
                victim = id;
                continue;
            }
            const Node& a = nodes_[id];
            const Node& b = nodes_[victim];
            if (a.pos < b.pos || (a.pos == b.pos && id < victim)) victim = id;
        }
        nodes_[victim].culled = true;
        survivors_.erase(nodes_, victim);
        ++culls_;
    }

    Snapshot take_snapshot(double s, const std::vector<Snapshot>& previous) {
        std::vector<std::uint64_t> ids = alive_.ids();
        std::sort(ids.begin(), ids.end());

        const Snapshot* prev = previous.empty() ? nullptr : &previous.back();
        Snapshot snap;
        snap.time = s;
        snap.particles.reserve(ids.size());
        for (std::uint64_t id : ids) {
            advance(id, s);
            SnapshotParticle p;
            p.position = nodes_[id].pos;
            p.id = id;
            p.culled = nodes_[id].culled;
            if (prev) {
                std::uint64_t a = id;
                while (nodes_[a].birth > prev->time) a = nodes_[a].parent;
                const auto it = std::lower_bound(prev->particles.begin(), prev->particles.end(), a,
                                                 [](const SnapshotParticle& q, std::uint64_t v) { return q.id < v; });
                p.ancestor = it - prev->particles.begin();
            }
            snap.particles.push_back(p);
        }
        return snap;
    }

    const BbmRunConfig& cfg_;
    std::uint64_t cap_n_;
    std::vector<Node> nodes_;
    IdSet alive_;
    IdSet survivors_;
    std::priority_queue<std::pair<double, std::uint64_t>, std::vector<std::pair<double, std::uint64_t>>,
                        std::greater<>>
        queue_;
    std::uint64_t culls_ = 0;
};

}  // namespace

void validate(const BbmRunConfig& cfg) {
    if (!(cfg.t_end > 0.0 && std::isfinite(cfg.t_end))) throw std::invalid_argument("BBM run: t_end must be positive");
    if (cfg.particle_cap < 1) throw std::invalid_argument("BBM run: particle_cap must be >= 1");
    if (cfg.particle_cap >= kNoSlot) throw std::invalid_argument("BBM run: particle_cap too large");
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
        const double s = cfg.snapshot_times[i];
        if (!(s >= 0.0 && s <= cfg.t_end)) throw std::invalid_argument("BBM run: snapshot time outside [0, t_end]");
        if (i > 0 && s < cfg.snapshot_times[i - 1]) throw std::invalid_argument("BBM run: snapshot times not sorted");
    }
}

LevelCount count_level(const Snapshot& pop, double x) {
    LevelCount out;
    out.x_max = kNegInf;
    const double level = x * pop.time;
    for (const SnapshotParticle& p : pop.particles) {
        if (p.position >= level) ++out.count;
        out.x_max = std::max(out.x_max, p.position);
    }
    return out;
}

std::vector<Snapshot> simulate_bbm(const BbmRunConfig& cfg) {
    validate(cfg);
    return Engine(cfg, kNoCap).run().snapshots;
}

NbbmRun simulate_nbbm(const BbmRunConfig& cfg, std::uint64_t cap_n) {
    validate(cfg);
    if (cap_n < 1) throw std::invalid_argument("N-BBM: cap must be >= 1");
    return Engine(cfg, cap_n).run();
}

double expected_count_oracle(double t, double x) {
    if (!(t > 0.0)) throw DomainError("t > 0", "expected_count_oracle: horizon must be positive");
    return std::exp(t) * normal_upper_tail(x * std::sqrt(t));
}

LevelExponentEstimate estimate_level_exponent(double t, double x, const mc::ReplicaPlan& plan) {
    if (!(t > 0.0)) throw DomainError("t > 0", "estimate_level_exponent: horizon must be positive");
    const std::vector<double> logs = mc::parallel_map(plan, [&](std::uint64_t seed, std::size_t) {
        BbmRunConfig cfg;
        cfg.t_end = t;
        cfg.seed = seed;
        const std::uint64_t n = count_level(simulate_bbm(cfg).back(), x).count;
        return n == 0 ? std::numeric_limits<double>::quiet_NaN() : std::log(static_cast<double>(n)) / t;
    });
    std::vector<double> kept;
    LevelExponentEstimate out;
    for (double v : logs) {
        if (std::isnan(v)) {
            ++out.zero_count;
        } else {
            kept.push_back(v);
        }
    }
    if (kept.empty()) throw NoDataError("estimate_level_exponent: every replica had N(t, x) = 0");
    out.estimate = mc::summarize(kept);
    out.estimate.zero_count = out.zero_count;
    out.low_confidence = 10 * out.zero_count > logs.size();
    return out;
}

MaxTailEstimate estimate_max_tail(double t, double x, const mc::ReplicaPlan& plan) {
    if (!(t > 0.0)) throw DomainError("t > 0", "estimate_max_tail: horizon must be positive");
    const std::vector<int> hits = mc::parallel_map(plan, [&](std::uint64_t seed, std::size_t) {
        BbmRunConfig cfg;
        cfg.t_end = t;
        cfg.seed = seed;
        return count_level(simulate_bbm(cfg).back(), x).x_max >= x * t ? 1 : 0;
    });
    std::size_t successes = 0;
    for (int h : hits) successes += static_cast<std::size_t>(h);

    MaxTailEstimate out;
    out.proportion = mc::summarize_proportion(successes, hits.size());
    if (successes == 0) {
        out.rate = -std::log(mc::clopper_pearson_upper(0, hits.size())) / t;
        out.rate_is_bound = true;
    } else {
        out.rate = -std::log(out.proportion.p_hat) / t;
    }
    return out;
}

int DiscretizationPlan::steps() const {
    const double raw = std::pow(t, 1.0 - delta);
    return std::max(1, static_cast<int>(std::ceil(raw - 1e-12)));
}

double DiscretizationPlan::mesh() const { return std::pow(t, delta_prime); }

std::vector<double> DiscretizationPlan::times() const {
    const int m = steps();
    const double step = std::pow(t, delta);
    std::vector<double> out(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = i * step;
    out.back() = t;
    return out;
}

double default_cutoff(double x) { return 2.0 * std::max(x, std::numbers::sqrt2) + 1.0; }

void validate(const DiscretizationPlan& plan) {
    if (!(plan.delta > 0.5 && plan.delta < 1.0)) throw DomainError("1/2 < delta < 1", "discretization: bad delta");
    if (!(plan.delta_prime > 0.0 && plan.delta_prime < 2.0 * plan.delta - 1.0)) {
        throw DomainError("0 < delta' < 2 delta - 1", "discretization: bad delta'");
    }
    if (!(plan.epsilon > 0.0)) throw DomainError("epsilon > 0", "discretization: bad epsilon");
    if (!(plan.cutoff > 0.0)) throw DomainError("C > 0", "discretization: bad cutoff");
    if (!(plan.t > 0.0)) throw DomainError("t > 0", "discretization: bad horizon");
}

BbmRunConfig discretized_run(const DiscretizationPlan& plan, std::uint64_t seed) {
    validate(plan);
    BbmRunConfig cfg;
    cfg.t_end = plan.t;
    cfg.snapshot_times = plan.times();
    cfg.seed = seed;
    return cfg;
}

std::vector<double> lineage_positions(const std::vector<Snapshot>& snapshots, std::size_t index) {
    if (snapshots.empty()) throw std::invalid_argument("lineage_positions: no snapshots");
    std::vector<double> out(snapshots.size());
    std::int64_t at = static_cast<std::int64_t>(index);
    for (std::size_t k = snapshots.size(); k-- > 0;) {
        const auto& ps = snapshots[k].particles;
        if (at < 0 || static_cast<std::size_t>(at) >= ps.size()) {
            throw std::out_of_range("lineage_positions: broken ancestor chain");
        }
        out[k] = ps[static_cast<std::size_t>(at)].position;
        at = ps[static_cast<std::size_t>(at)].ancestor;
    }
    return out;
}

LatticePath discretize_lineage(const std::vector<double>& lineage, const DiscretizationPlan& plan) {
    validate(plan);
    LatticePath path;
    path.times = plan.times();
    if (lineage.size() != path.times.size()) {
        throw std::invalid_argument("discretize_lineage: need one position per time s_0 .. s_M");
    }
    path.mesh = plan.mesh();
    path.cells.reserve(lineage.size());
    const double box = plan.cutoff * plan.t;
    for (double pos : lineage) {
        path.cells.push_back(std::llround(pos / path.mesh));
        if (std::abs(pos) > box) path.e1_violation = true;
    }
    return path;
}

GoodnessReport classify_path(const LatticePath& path, double a, double epsilon, double t) {
    GoodnessReport out;
    const std::size_t m = path.cells.size() - 1;
    const double end = path.value(m);
    for (std::size_t i = 1; i < m; ++i) {
        const double rest = t - path.times[i];
        const double gap = end - path.value(i);
        const double margin = rest - gap * gap / (2.0 * rest) - (a - epsilon) * t;
        if (margin > out.margin) {
            out.margin = margin;
            out.witness = i;
        }
    }
    out.good = out.margin >= 0.0;
    if (!out.good) out.witness.reset();
    return out;
}

EventReport check_events(const std::vector<Snapshot>& snapshots, const DiscretizationPlan& plan) {
    validate(plan);
    const std::vector<double> times = plan.times();
    const double tol = 1e-9 * std::max(1.0, plan.t);

    std::vector<std::size_t> at(times.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        while (k < snapshots.size() && snapshots[k].time < times[i] - tol) ++k;
        if (k == snapshots.size() || std::abs(snapshots[k].time - times[i]) > tol) {
            throw std::invalid_argument("check_events: missing snapshot at s_" + std::to_string(i));
        }
        at[i] = k;
    }

    EventReport out;
    out.e2_threshold = plan.t * plan.t * std::exp(std::pow(plan.t, plan.delta));
    const double box = plan.cutoff * plan.t;

    for (std::size_t i = 0; i < times.size(); ++i) {
        for (const SnapshotParticle& p : snapshots[at[i]].particles) {
            if (std::abs(p.position) > box) {
                out.e1 = false;
                out.e1_violations.push_back({i, p.id, p.position});
            }
        }
    }

    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const Snapshot& from = snapshots[at[i]];
        std::vector<double> descendants(from.particles.size(), 0.0);
        for (std::size_t q = 0; q < snapshots[at[i + 1]].particles.size(); ++q) {
            std::int64_t idx = static_cast<std::int64_t>(q);
            for (std::size_t level = at[i + 1]; level > at[i]; --level) {
                idx = snapshots[level].particles[static_cast<std::size_t>(idx)].ancestor;
            }
            descendants[static_cast<std::size_t>(idx)] += 1.0;
        }
        for (std::size_t q = 0; q < from.particles.size(); ++q) {
            if (descendants[q] >= out.e2_threshold) {
                out.e2 = false;
                out.e2_violations.push_back({i, from.particles[q].id, descendants[q]});
            }
        }
    }
    return out;
}

}  // namespace lsdev::bbm

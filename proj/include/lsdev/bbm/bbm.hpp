#pragma once

/**
 * Branching Brownian motion with unit branching rate and binary splitting,
 * simulated exactly and event by event, plus the N-BBM selection overlay and
 * the time/space discretization of lineages used to bound level-set counts.
 *
 * Randomness is attached to particles, not to events: particle `id` of a run
 * with seed `seed` draws from the Philox stream keyed by derive_seed(seed, id).
 * Block 0 gives its lifetime, blocks 1, 2, ... its Brownian increments.
 */

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "lsdev/mc/replicas.hpp"

namespace lsdev::bbm {

inline constexpr std::uint64_t kNoCap = std::numeric_limits<std::uint64_t>::max();

struct BbmRunConfig {
    double t_end = 1.0;
    /// Sorted times in [0, t_end]. t_end is always snapshotted as well.
    std::vector<double> snapshot_times;
    std::uint64_t seed = 0;
    std::uint64_t particle_cap = 10'000'000;
};

void validate(const BbmRunConfig& cfg);

struct SnapshotParticle {
    double position = 0.0;
    std::uint64_t id = 0;
    /// Index of the ancestor in the previous snapshot; -1 in the first one.
    std::int64_t ancestor = -1;
    /// Removed by the N-BBM selection (always false for plain BBM).
    bool culled = false;
};

/// Population at one time, particles sorted by id.
struct Snapshot {
    double time = 0.0;
    std::vector<SnapshotParticle> particles;
};

struct LevelCount {
    std::uint64_t count = 0;  ///< N(t, x) = #{particles >= x t}
    double x_max = 0.0;       ///< rightmost position
};

/// Counts over every particle, culled or not.
LevelCount count_level(const Snapshot& pop, double x);

std::vector<Snapshot> simulate_bbm(const BbmRunConfig& cfg);

struct NbbmRun {
    /// Snapshots of the underlying BBM; `culled` marks particles outside the N-BBM.
    std::vector<Snapshot> snapshots;
    std::vector<double> bbm_max;   ///< per snapshot
    std::vector<double> nbbm_max;  ///< per snapshot
    std::uint64_t culls = 0;
};

/// Runs BBM and the coupled N-BBM in one pass. Whenever the surviving
/// population exceeds cap_n, the leftmost survivor is removed (ties go to the
/// smaller id); descendants of removed particles are removed. With
/// cap_n == kNoCap the snapshots coincide with simulate_bbm.
NbbmRun simulate_nbbm(const BbmRunConfig& cfg, std::uint64_t cap_n);

/// e^t P(N(0, t) >= x t).
double expected_count_oracle(double t, double x);

struct LevelExponentEstimate {
    mc::Estimate estimate;   ///< of log N(t, x) / t over replicas with N > 0
    std::size_t zero_count = 0;
    bool low_confidence = false;  ///< more than 10% of replicas were zero
};

/// Throws NoDataError when every replica has N(t, x) = 0.
LevelExponentEstimate estimate_level_exponent(double t, double x, const mc::ReplicaPlan& plan);

struct MaxTailEstimate {
    mc::ProportionEstimate proportion;  ///< of P(X_max(t) >= x t)
    /// -log(p_hat)/t, or -log(upper confidence bound)/t with zero successes.
    double rate = 0.0;
    bool rate_is_bound = false;
};

MaxTailEstimate estimate_max_tail(double t, double x, const mc::ReplicaPlan& plan);

struct DiscretizationPlan {
    double delta = 0.75;        ///< time mesh t^delta, 1/2 < delta < 1
    double delta_prime = 0.25;  ///< space mesh t^delta', 0 < delta' < 2 delta - 1
    double epsilon = 0.05;
    double cutoff = 4.0;        ///< C of the box [-C t, C t]
    double t = 1.0;

    int steps() const;          ///< M = ceil(t^{1 - delta})
    double mesh() const;        ///< t^delta'
    std::vector<double> times() const;  ///< s_0 .. s_M, s_M = t
};

/// 2 max(x, sqrt 2) + 1.
double default_cutoff(double x);

void validate(const DiscretizationPlan& plan);

/// Snapshot times s_0 .. s_M for a run feeding discretize_lineage / check_events.
BbmRunConfig discretized_run(const DiscretizationPlan& plan, std::uint64_t seed);

/// Positions at s_0 .. s_M of the ancestors of particle `index` of the last snapshot.
std::vector<double> lineage_positions(const std::vector<Snapshot>& snapshots, std::size_t index);

struct LatticePath {
    std::vector<double> times;
    std::vector<std::int64_t> cells;  ///< f(s_i) = cells[i] * mesh
    double mesh = 1.0;
    bool e1_violation = false;

    double value(std::size_t i) const { return static_cast<double>(cells[i]) * mesh; }
};

/// Rounds each ancestor position to the nearest multiple of the mesh.
LatticePath discretize_lineage(const std::vector<double>& lineage, const DiscretizationPlan& plan);

struct GoodnessReport {
    bool good = false;
    std::optional<std::size_t> witness;
    /// Best value of (t - s_i) - (f(s_M) - f(s_i))^2 / (2 (t - s_i)) - (a - eps) t over i in [1, M-1].
    double margin = -std::numeric_limits<double>::infinity();
};

GoodnessReport classify_path(const LatticePath& path, double a, double epsilon, double t);

struct EventViolation {
    std::size_t step = 0;
    std::uint64_t id = 0;
    double value = 0.0;  ///< position (E1) or descendant count (E2)
};

struct EventReport {
    bool e1 = true;
    bool e2 = true;
    std::vector<EventViolation> e1_violations;
    std::vector<EventViolation> e2_violations;
    double e2_threshold = 0.0;  ///< t^2 e^{t^delta}
};

/// Throws std::invalid_argument when a snapshot at some s_i is missing.
EventReport check_events(const std::vector<Snapshot>& snapshots, const DiscretizationPlan& plan);

}  // namespace lsdev::bbm

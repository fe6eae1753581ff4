#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "lsdev/mc/rng.hpp"

namespace lsdev::mc {

struct ReplicaPlan {
    std::size_t replicas = 1;
    std::uint64_t master_seed = 0;
    /// 0 selects std::thread::hardware_concurrency().
    std::size_t max_concurrency = 0;
};

/// Sample mean with normal-approximation interval.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
    /// Replicas excluded from a log-estimator because their count was zero.
    std::size_t zero_count = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Binomial proportion. Uses Clopper-Pearson bounds when successes < 10,
/// the normal approximation otherwise.
struct ProportionEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::size_t successes = 0;
    std::size_t trials = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool exact_interval = false;
};

/// Failure of one or more replicas. Nothing is dropped silently.
class ReplicaFailure : public std::runtime_error {
public:
    ReplicaFailure(std::vector<std::pair<std::size_t, std::string>> failures, const std::string& what)
        : std::runtime_error(what), failures_(std::move(failures)) {}

    const std::vector<std::pair<std::size_t, std::string>>& failures() const noexcept { return failures_; }

private:
    std::vector<std::pair<std::size_t, std::string>> failures_;
};

std::size_t effective_concurrency(const ReplicaPlan& plan);

/// Runs `task(derived_seed, index)` for every replica index and returns the
/// results in index order. Workers pull indices from a shared counter, so the
/// output does not depend on scheduling.
template <typename Task>
auto parallel_map(const ReplicaPlan& plan, Task&& task)
    -> std::vector<std::invoke_result_t<Task&, std::uint64_t, std::size_t>> {
    using Result = std::invoke_result_t<Task&, std::uint64_t, std::size_t>;
    // vector<bool> packs bits; concurrent writes to neighbours would race.
    static_assert(!std::is_same_v<Result, bool>, "return an integer instead of bool");
    if (plan.replicas == 0) throw std::invalid_argument("replica plan needs replicas >= 1");

    std::vector<Result> results(plan.replicas);
    std::vector<std::pair<std::size_t, std::string>> failures;
    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= plan.replicas) return;
            try {
                results[i] = task(derive_seed(plan.master_seed, i), i);
            } catch (const std::exception& e) {
                std::lock_guard lock(failure_mutex);
                failures.emplace_back(i, e.what());
            }
        }
    };

    const std::size_t workers = std::min(effective_concurrency(plan), plan.replicas);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    if (!failures.empty()) {
        std::sort(failures.begin(), failures.end());
        throw ReplicaFailure(failures, std::to_string(failures.size()) + " replica(s) failed; first (#" +
                                           std::to_string(failures.front().first) + "): " + failures.front().second);
    }
    return results;
}

/// Mean and standard error. The values are sorted before summation so the
/// result is bit-identical under any permutation of the input.
Estimate summarize(std::span<const double> values);

ProportionEstimate summarize_proportion(std::size_t successes, std::size_t trials);

/// One-sided 95% Clopper-Pearson upper bound for `successes` out of `trials`.
double clopper_pearson_upper(std::size_t successes, std::size_t trials, double level = 0.95);

template <typename Task>
Estimate run_replicas(const ReplicaPlan& plan, Task&& task) {
    const std::vector<double> values = parallel_map(plan, std::forward<Task>(task));
    return summarize(values);
}

}  // namespace lsdev::mc

#include "lsdev/mc/replicas.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <thread>

namespace lsdev::mc {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Neumaier compensated sum over an already sorted sequence.
double stable_sum(const std::vector<double>& sorted) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : sorted) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

}  // namespace

std::size_t effective_concurrency(const ReplicaPlan& plan) {
    if (plan.max_concurrency > 0) return plan.max_concurrency;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

Estimate summarize(std::span<const double> values) {
    Estimate est;
    est.count = values.size();
    if (values.empty()) return est;

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    est.mean = stable_sum(sorted) / n;

    if (sorted.size() > 1) {
        std::vector<double> sq(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const double d = sorted[i] - est.mean;
            sq[i] = d * d;
        }
        std::sort(sq.begin(), sq.end());
        const double var = stable_sum(sq) / (n - 1.0);
        est.std_error = std::sqrt(var / n);
    }
    est.ci_low = est.mean - kZ95 * est.std_error;
    est.ci_high = est.mean + kZ95 * est.std_error;
    return est;
}

double clopper_pearson_upper(std::size_t successes, std::size_t trials, double level) {
    if (trials == 0) return 1.0;
    if (successes >= trials) return 1.0;
    const double alpha = 1.0 - level;
    return boost::math::ibeta_inv(static_cast<double>(successes) + 1.0,
                                  static_cast<double>(trials - successes), 1.0 - alpha);
}

ProportionEstimate summarize_proportion(std::size_t successes, std::size_t trials) {
    ProportionEstimate est;
    est.successes = successes;
    est.trials = trials;
    if (trials == 0) return est;
    const auto n = static_cast<double>(trials);
    est.p_hat = static_cast<double>(successes) / n;
    est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / n);

    if (successes < 10) {
        // Two-sided 95% Clopper-Pearson.
        est.exact_interval = true;
        const double half_alpha = 0.025;
        est.ci_low = successes == 0
                         ? 0.0
                         : boost::math::ibeta_inv(static_cast<double>(successes),
                                                  static_cast<double>(trials - successes) + 1.0, half_alpha);
        est.ci_high = successes == trials
                          ? 1.0
                          : boost::math::ibeta_inv(static_cast<double>(successes) + 1.0,
                                                   static_cast<double>(trials - successes), 1.0 - half_alpha);
    } else {
        est.ci_low = std::max(0.0, est.p_hat - kZ95 * est.std_error);
        est.ci_high = std::min(1.0, est.p_hat + kZ95 * est.std_error);
    }
    return est;
}

}  // namespace lsdev::mc

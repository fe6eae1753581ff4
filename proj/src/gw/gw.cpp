#include "lsdev/gw/gw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lsdev/errors.hpp"

namespace lsdev::gw {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact rational value of a finite double.
BigRational exact_rational(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("exact_rational: non-finite value");
    int exp = 0;
    const double frac = std::frexp(v, &exp);
    // frac * 2^53 is an integer for every double.
    BigInt mant = static_cast<long long>(std::ldexp(frac, 53));
    exp -= 53;
    if (exp >= 0) return BigRational(mant << exp);
    return BigRational(mant, BigInt(1) << -exp);
}

BigInt floor_nonnegative(const BigRational& r) {
    return boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
}

BigInt ceil_nonnegative(const BigRational& r) {
    const BigInt& num = boost::multiprecision::numerator(r);
    const BigInt& den = boost::multiprecision::denominator(r);
    BigInt q = num / den;
    if (q * den != num) ++q;
    return q;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    return __builtin_add_overflow(a, b, &out) ? kSaturated : out;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    return __builtin_mul_overflow(a, b, &out) ? kSaturated : out;
}

// Population means beyond this are reported as saturated rather than sampled.
constexpr double kSamplingLimit = 0x1.0p62;

}  // namespace

std::string to_string(LawKind kind) {
    switch (kind) {
        case LawKind::deterministic: return "deterministic";
        case LawKind::geometric: return "geometric";
        case LawKind::poisson: return "poisson";
        case LawKind::table: return "table";
    }
    return "unknown";
}

OffspringLaw OffspringLaw::deterministic(std::uint64_t k) {
    return OffspringLaw(LawKind::deterministic, static_cast<double>(k), static_cast<double>(k), {});
}

OffspringLaw OffspringLaw::geometric(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("0 < p <= 1", "geometric law: bad success probability");
    return OffspringLaw(LawKind::geometric, p, 1.0 / p, {});
}

OffspringLaw OffspringLaw::poisson(double mean) {
    if (!(mean > 0.0 && std::isfinite(mean))) throw DomainError("0 < mean < inf", "poisson law: bad mean");
    return OffspringLaw(LawKind::poisson, mean, mean, {});
}

OffspringLaw OffspringLaw::table(std::vector<double> pmf) {
    if (pmf.empty()) throw DomainError("nonempty pmf", "table law: empty pmf");
    double total = 0.0;
    double mean = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        if (!(pmf[k] >= 0.0)) throw DomainError("pmf >= 0", "table law: negative probability");
        total += pmf[k];
        mean += static_cast<double>(k) * pmf[k];
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("sum pmf = 1", "table law: pmf does not sum to 1");
    while (pmf.size() > 1 && pmf.back() == 0.0) pmf.pop_back();
    return OffspringLaw(LawKind::table, 0.0, mean, std::move(pmf));
}

std::optional<std::uint64_t> OffspringLaw::max_support() const {
    switch (kind_) {
        case LawKind::deterministic: return static_cast<std::uint64_t>(param_);
        case LawKind::table: return pmf_.size() - 1;
        default: return std::nullopt;
    }
}

double OffspringLaw::mgf_radius() const {
    if (kind_ == LawKind::geometric && param_ < 1.0) return -std::log1p(-param_);
    return kInf;
}

double OffspringLaw::log_mgf(double lambda) const {
    switch (kind_) {
        case LawKind::deterministic: return lambda * param_;
        case LawKind::poisson: return param_ * std::expm1(lambda);
        case LawKind::geometric: {
            if (param_ == 1.0) return lambda;
            if (!(lambda < mgf_radius())) {
                throw DivergenceError("geometric law: MGF diverges at lambda >= -log(1-p)");
            }
            return std::log(param_) + lambda - std::log1p(-(1.0 - param_) * std::exp(lambda));
        }
        case LawKind::table: {
            double top = -kInf;
            for (std::size_t k = 0; k < pmf_.size(); ++k) {
                if (pmf_[k] > 0.0) top = std::max(top, std::log(pmf_[k]) + lambda * static_cast<double>(k));
            }
            double acc = 0.0;
            for (std::size_t k = 0; k < pmf_.size(); ++k) {
                if (pmf_[k] > 0.0) acc += std::exp(std::log(pmf_[k]) + lambda * static_cast<double>(k) - top);
            }
            return top + std::log(acc);
        }
    }
    return 0.0;
}

std::uint64_t OffspringLaw::sample_sum(std::uint64_t count, mc::Stream& rng) const {
    if (count == 0) return 0;
    switch (kind_) {
        case LawKind::deterministic: return saturating_mul(count, static_cast<std::uint64_t>(param_));
        case LawKind::poisson: {
            const double mu = static_cast<double>(count) * param_;
            if (mu > kSamplingLimit) return kSaturated;
            std::poisson_distribution<std::uint64_t> dist(mu);
            return dist(rng);
        }
        case LawKind::geometric: {
            if (param_ == 1.0) return count;
            if (static_cast<double>(count) / param_ > kSamplingLimit) return kSaturated;
            // Failures before `count` successes, plus the successes themselves.
            std::negative_binomial_distribution<std::uint64_t> dist(count, param_);
            return saturating_add(count, dist(rng));
        }
        case LawKind::table: {
            std::uint64_t remaining = count;
            double remaining_mass = 1.0;
            std::uint64_t total = 0;
            for (std::size_t k = 0; k < pmf_.size() && remaining > 0; ++k) {
                std::uint64_t n_k = remaining;
                if (k + 1 < pmf_.size()) {
                    const double q = remaining_mass > 0.0 ? std::clamp(pmf_[k] / remaining_mass, 0.0, 1.0) : 1.0;
                    std::binomial_distribution<std::uint64_t> dist(remaining, q);
                    n_k = dist(rng);
                }
                total = saturating_add(total, saturating_mul(n_k, k));
                remaining -= n_k;
                remaining_mass -= pmf_[k];
            }
            return total;
        }
    }
    return 0;
}

std::string OffspringLaw::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_);
    switch (kind_) {
        case LawKind::deterministic: os << "(k=" << static_cast<std::uint64_t>(param_) << ")"; break;
        case LawKind::geometric: os << "(p=" << param_ << ")"; break;
        case LawKind::poisson: os << "(mean=" << param_ << ")"; break;
        case LawKind::table: {
            os << "(";
            for (std::size_t k = 0; k < pmf_.size(); ++k) os << (k ? "," : "") << pmf_[k];
            os << ")";
            break;
        }
    }
    return os.str();
}

std::vector<double> GwPlan::means() const {
    std::vector<double> out;
    out.reserve(laws.size());
    for (const OffspringLaw& law : laws) out.push_back(law.mean());
    return out;
}

void validate(const GwPlan& plan) {
    if (plan.laws.empty()) throw std::invalid_argument("GW plan: at least one generation required");
    if (plan.ell < 1) throw std::invalid_argument("GW plan: ell must be >= 1");
}

MgfCheck verify_mgf_condition(const OffspringLaw& law, double lambda, double alpha) {
    if (!(lambda > 0.0)) throw DomainError("lambda > 0", "MGF condition: lambda must be positive");
    if (!(alpha > 1.0)) throw DomainError("alpha > 1", "MGF condition: alpha must exceed 1");
    MgfCheck out;
    out.log_mgf = law.log_mgf(lambda);
    out.log_gap = alpha * lambda * law.mean() - out.log_mgf;
    out.holds = out.log_gap >= 0.0;
    return out;
}

double max_admissible_lambda(const OffspringLaw& law, double alpha) {
    if (!(alpha > 1.0)) throw DomainError("alpha > 1", "max_admissible_lambda: alpha must exceed 1");
    if (!(law.mean() > 0.0)) throw DomainError("m > 0", "max_admissible_lambda: law has mean 0");
    auto gap = [&](double lambda) {
        if (!(lambda < law.mgf_radius())) return -kInf;
        return alpha * lambda * law.mean() - law.log_mgf(lambda);
    };

    double hi = 1.0;
    while (gap(hi) >= 0.0) {
        hi *= 2.0;
        if (hi > 1e6) return kInf;
    }
    if (std::isfinite(law.mgf_radius())) hi = std::min(hi, law.mgf_radius());
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (gap(mid) >= 0.0 ? lo : hi) = mid;
    }
    return lo;
}

namespace {

BigRational threshold_of(const BigRational& growth, std::uint64_t ell, std::span<const double> means) {
    const std::size_t n = means.size();
    BigRational best_product = 0;
    BigRational suffix = 1;
    for (std::size_t i = n; i-- > 0;) {
        suffix *= exact_rational(means[i]);
        if (suffix > best_product) best_product = suffix;
    }
    BigRational power = 1;
    for (std::size_t i = 0; i < n; ++i) power *= growth;
    const BigRational candidate = power * BigRational(BigInt(ell)) * best_product;
    const BigRational floor_ell = BigRational(BigInt(ell));
    return candidate > floor_ell ? candidate : floor_ell;
}

void check_growth_args(double alpha, double delta, std::uint64_t ell, std::span<const double> means) {
    if (!(alpha > 1.0)) throw DomainError("alpha > 1", "GW bound: alpha must exceed 1");
    if (!(delta > 0.0)) throw DomainError("delta > 0", "GW bound: delta must be positive");
    if (ell < 1) throw DomainError("ell >= 1", "GW bound: ell must be a positive integer");
    if (means.empty()) throw DomainError("n >= 1", "GW bound: at least one generation required");
    for (double m : means) {
        if (!(m > 0.0 && std::isfinite(m))) throw DomainError("0 < m_i < inf", "GW bound: means must be positive");
    }
}

}  // namespace

BSequence b_sequence(double alpha, double delta, std::uint64_t ell, std::span<const double> means) {
    check_growth_args(alpha, delta, ell, means);
    const BigRational growth = exact_rational(alpha) + exact_rational(delta);
    const BigInt ell_big(ell);

    BSequence out;
    out.values.reserve(means.size() + 1);
    out.values.push_back(ell_big);
    for (double m : means) {
        const BigInt next = floor_nonnegative(growth * exact_rational(m) * BigRational(out.values.back()));
        out.values.push_back(next > ell_big ? next : ell_big);
    }
    out.cap = threshold_of(growth, ell, means);
    out.within_cap = BigRational(out.values.back()) <= out.cap;
    return out;
}

PropBound prop_bound(const PropBoundQuery& q) {
    validate(q.plan);
    const std::vector<double> means = q.plan.means();
    check_growth_args(q.alpha, q.delta, q.plan.ell, means);
    if (q.lambdas.size() != q.plan.n()) {
        throw std::invalid_argument("prop_bound: need one lambda per generation");
    }
    for (std::size_t i = 0; i < q.lambdas.size(); ++i) {
        const double lambda = q.lambdas[i];
        if (!(lambda > 0.0)) throw MgfConditionError(i, "prop_bound: lambda_" + std::to_string(i) + " must be positive");
        bool holds = false;
        try {
            holds = verify_mgf_condition(q.plan.laws[i], lambda, q.alpha).holds;
        } catch (const DivergenceError&) {
            holds = false;
        }
        if (!holds) {
            throw MgfConditionError(i, "prop_bound: MGF condition fails at generation " + std::to_string(i));
        }
    }

    PropBound out;
    out.threshold_exact = threshold_of(exact_rational(q.alpha) + exact_rational(q.delta), q.plan.ell, means);
    out.threshold = static_cast<double>(out.threshold_exact);
    out.count_threshold = ceil_nonnegative(out.threshold_exact);

    const auto [lo, hi] = std::minmax_element(q.lambdas.begin(), q.lambdas.end());
    const double ell = static_cast<double>(q.plan.ell);
    const double exponent = -q.delta * ell / (q.alpha + q.delta) * *lo + *hi;
    out.raw_bound = static_cast<double>(q.plan.n()) * std::exp(exponent);
    out.bound = std::clamp(out.raw_bound, 0.0, 1.0);
    return out;
}

GwTrajectory simulate_gw(const GwPlan& plan, std::uint64_t seed, const SimulationOptions& opts) {
    validate(plan);
    if (opts.population_cap == 0 || opts.population_cap > (std::uint64_t{1} << 62)) {
        throw std::invalid_argument("simulate_gw: population cap must lie in [1, 2^62]");
    }
    mc::Stream rng(seed);
    GwTrajectory out;
    out.z.reserve(plan.n() + 1);
    out.z.push_back(plan.ell);
    for (const OffspringLaw& law : plan.laws) {
        const std::uint64_t next = law.sample_sum(out.z.back(), rng);
        out.z.push_back(next);
        if (next > opts.population_cap) {
            out.censored = true;
            break;
        }
    }
    return out;
}

std::optional<std::vector<double>> exact_distribution(const GwPlan& plan, std::uint64_t max_population) {
    validate(plan);
    for (const OffspringLaw& law : plan.laws) {
        if (!law.max_support()) return std::nullopt;
    }
    const std::size_t cap = static_cast<std::size_t>(max_population);
    if (plan.ell > max_population) return std::nullopt;

    std::vector<double> dist(plan.ell + 1, 0.0);
    dist[plan.ell] = 1.0;
    for (const OffspringLaw& law : plan.laws) {
        std::vector<double> pmf = law.pmf();
        if (law.kind() == LawKind::deterministic) {
            pmf.assign(static_cast<std::size_t>(law.parameter()) + 1, 0.0);
            pmf.back() = 1.0;
        }
        const std::size_t top = dist.size() - 1;
        const std::size_t reach = top * (pmf.size() - 1);
        if (reach > cap) return std::nullopt;

        std::vector<double> next(reach + 1, 0.0);
        std::vector<double> power{1.0};  // law of the sum of z copies
        for (std::size_t z = 0; z <= top; ++z) {
            if (dist[z] != 0.0) {
                for (std::size_t v = 0; v < power.size(); ++v) next[v] += dist[z] * power[v];
            }
            if (z == top) break;
            std::vector<double> grown(power.size() + pmf.size() - 1, 0.0);
            for (std::size_t v = 0; v < power.size(); ++v) {
                if (power[v] == 0.0) continue;
                for (std::size_t k = 0; k < pmf.size(); ++k) grown[v + k] += power[v] * pmf[k];
            }
            power = std::move(grown);
        }
        while (next.size() > 1 && next.back() == 0.0) next.pop_back();
        dist = std::move(next);
    }
    return dist;
}

ExceedanceEstimate empirical_exceedance(const GwPlan& plan, const BigInt& count_threshold,
                                        const mc::ReplicaPlan& replicas, const SimulationOptions& opts) {
    validate(plan);
    if (count_threshold < 0) throw std::invalid_argument("empirical_exceedance: negative threshold");
    const bool reachable = count_threshold <= BigInt(kSaturated);
    const std::uint64_t thr = reachable ? static_cast<std::uint64_t>(count_threshold) : kSaturated;

    // 0: below, 1: exceeded, 2: censored (counted as exceeded).
    const std::vector<int> outcome = mc::parallel_map(replicas, [&](std::uint64_t seed, std::size_t) {
        const GwTrajectory tr = simulate_gw(plan, seed, opts);
        if (tr.censored) return 2;
        return reachable && tr.z.back() >= thr ? 1 : 0;
    });

    ExceedanceEstimate out;
    std::size_t hits = 0;
    for (int o : outcome) {
        if (o != 0) ++hits;
        if (o == 2) ++out.censored;
    }
    out.proportion = mc::summarize_proportion(hits, outcome.size());

    if (auto dist = exact_distribution(plan)) {
        double tail = 0.0;
        if (reachable) {
            for (std::size_t z = dist->size(); z-- > 0;) {
                if (z < thr) break;
                tail += (*dist)[z];
            }
        }
        out.exact = tail;
    }
    return out;
}

}  // namespace lsdev::gw

#include "lsdev/rates/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lsdev/errors.hpp"

namespace lsdev::rates {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxRecentres = 200;

struct Candidate {
    double value;
    std::vector<double> point;
};

std::string fmt_num(double v) {
    std::string s = std::to_string(v);
    return s;
}

}  // namespace

double psi(double x) {
    if (!(x > 0.0)) throw DomainError("x > 0", "psi: speed must be positive, got " + fmt_num(x));
    return 0.5 * x * x - 1.0;
}

void validate(const BbmRateQuery& q) {
    if (!(q.x > 0.0)) throw DomainError("x > 0", "BBM rate query: speed must be positive, got " + fmt_num(q.x));
    if (!(q.t > 0.0)) throw DomainError("t > 0", "BBM rate query: horizon must be positive, got " + fmt_num(q.t));
    if (!(q.a < 1.0)) throw DomainError("a < 1", "BBM rate query: exponent must be below 1, got " + fmt_num(q.a));
    const double lower = std::max(0.0, 1.0 - 0.5 * q.x * q.x);
    if (!(q.a >= lower)) {
        throw DomainError("a >= (1 - x^2/2)^+",
                          "BBM rate query: exponent " + fmt_num(q.a) + " below " + fmt_num(lower));
    }
}

void validate(const GffRateQuery& q) {
    if (!(q.eta > 0.0 && q.eta < 1.0)) {
        throw DomainError("0 < eta < 1", "GFF rate query: level fraction out of range, got " + fmt_num(q.eta));
    }
    if (!(q.a < 1.0)) throw DomainError("a < 1", "GFF rate query: exponent must be below 1, got " + fmt_num(q.a));
    const double lower = 1.0 - q.eta * q.eta;
    if (!(q.a >= lower)) {
        throw DomainError("a >= 1 - eta^2",
                          "GFF rate query: exponent " + fmt_num(q.a) + " below " + fmt_num(lower));
    }
}

double rate_I(double a, double x) {
    validate(BbmRateQuery{x, a, 1.0});
    return x * x / (2.0 * (1.0 - a)) - 1.0;
}

double rate_J(double a, double eta) {
    validate(GffRateQuery{eta, a});
    return 2.0 * eta * eta / (1.0 - a) - 2.0;
}

VariationalSolution solve_bbm_variational(const BbmRateQuery& q) {
    validate(q);
    const double x = q.x;
    const double a = q.a;
    const double u = 1.0 - a;
    const double den = x * x - 2.0 * u * u;
    if (!(den > 0.0)) {
        throw DomainError("x^2 > 2(1-a)^2", "BBM variational problem: degenerate denominator");
    }

    // Unit horizon.
    const double s = u * (x * x - 2.0 * u) / den;
    const double y = x * s / u;

    double value = 0.0;
    if (s > 0.0) value = s - y * y / (2.0 * s);

    double residual = 0.0;
    const double rest = 1.0 - s;
    if (rest > 0.0) {
        const double gap = x - y;
        residual = rest - gap * gap / (2.0 * rest) - a;
    }
    // rest == 0 only at a = 0 with x >= sqrt 2, where the maximizer is the
    // corner (t, xt) and the constraint holds with equality in the limit.

    VariationalSolution sol;
    sol.maximizer = {s * q.t, y * q.t};
    sol.value = value * q.t;
    sol.constraint_residual = residual * q.t;
    return sol;
}

VariationalSolution solve_gff_variational(const GffRateQuery& q) {
    validate(q);
    const double eta = q.eta;
    const double a = q.a;
    const double u = 1.0 - a;
    const double e2 = eta * eta;
    const double den = e2 - u * u;
    if (!(den > 0.0)) {
        throw DomainError("eta^2 > (1-a)^2", "GFF variational problem: degenerate denominator");
    }

    const double s = a * e2 / den;
    const double b = (e2 - u) * eta / den;
    const double y = eta;

    double value = 0.0;
    const double rest = 1.0 - s;
    if (rest > 0.0) value = rest - b * b / rest;

    VariationalSolution sol;
    sol.maximizer = {s, b, y};
    sol.value = value;
    sol.constraint_residual = s - (y - b) * (y - b) / s - a;
    return sol;
}

ConstrainedSup bbm_level_problem(const BbmRateQuery& q, double padding) {
    validate(q);
    const double t = q.t;
    const double x = q.x;
    const double a = q.a;
    // The constraint forces s <= (1-a)t and (xt - y)^2 <= 2(t-s)((1-a)t - s).
    const double u = 1.0 - a;
    const double reach = std::sqrt(2.0 * u) * t;

    ConstrainedSup p;
    p.name = "bbm-level-set";
    p.lower = {0.0, x * t - (1.0 + padding) * reach};
    p.upper = {u * t, (1.0 + padding) * x * t};
    p.objective = [](std::span<const double> v) {
        const double s = v[0];
        const double y = v[1];
        if (!(s > 0.0)) return kNaN;
        return s - y * y / (2.0 * s);
    };
    p.constraint = [t, x, a](std::span<const double> v) {
        const double s = v[0];
        const double y = v[1];
        const double rest = t - s;
        if (!(rest > 0.0)) return kNaN;
        const double z = std::max(x * t, y);
        const double gap = z - y;
        return rest - gap * gap / (2.0 * rest) - a * t;
    };
    return p;
}

ConstrainedSup gff_level_problem(const GffRateQuery& q, double padding) {
    validate(q);
    const double eta = q.eta;
    const double a = q.a;
    // The constraint forces s >= a and |y - b| <= sqrt(s(s-a)) <= sqrt(1-a).
    const double reach = std::sqrt(1.0 - a);

    ConstrainedSup p;
    p.name = "gff-level-set";
    p.lower = {a, -(1.0 + padding), eta};
    p.upper = {1.0, 1.0 + padding, 1.0 + padding + reach};
    p.objective = [](std::span<const double> v) {
        const double s = v[0];
        const double b = v[1];
        const double rest = 1.0 - s;
        if (!(s > 0.0 && rest > 0.0)) return kNaN;
        return rest - b * b / rest;
    };
    p.constraint = [a](std::span<const double> v) {
        const double s = v[0];
        const double b = v[1];
        const double y = v[2];
        if (!(s > 0.0)) return kNaN;
        return s - (y - b) * (y - b) / s - a;
    };
    return p;
}

VariationalSolution grid_certify(const ConstrainedSup& problem, const GridOracleConfig& cfg) {
    const std::size_t dim = problem.lower.size();
    if (dim == 0 || problem.upper.size() != dim) throw std::invalid_argument("grid_certify: malformed box");
    if (cfg.resolution < 16) throw std::invalid_argument("grid_certify: resolution must be >= 16");
    if (cfg.refinement_levels < 1) throw std::invalid_argument("grid_certify: refinement_levels must be >= 1");
    if (cfg.candidates < 1) throw std::invalid_argument("grid_certify: candidates must be >= 1");

    const auto res = static_cast<std::size_t>(cfg.resolution);
    const auto keep = static_cast<std::size_t>(cfg.candidates);

    // Best `keep` feasible points seen so far, sorted by decreasing objective.
    std::vector<Candidate> pool;
    auto offer = [&](double value, const std::vector<double>& p) {
        if (pool.size() == keep && !(value > pool.back().value)) return;
        auto pos = std::upper_bound(pool.begin(), pool.end(), value,
                                    [](double v, const Candidate& c) { return v > c.value; });
        pool.insert(pos, Candidate{value, p});
        if (pool.size() > keep) pool.pop_back();
    };

    std::vector<double> half(dim);
    for (std::size_t k = 0; k < dim; ++k) half[k] = 0.5 * (problem.upper[k] - problem.lower[k]);

    std::vector<double> lo(dim);
    std::vector<double> hi(dim);
    std::vector<double> point(dim);
    std::vector<std::size_t> idx(dim);
    std::vector<double> level_values;

    const std::size_t cells = [&] {
        std::size_t n = 1;
        for (std::size_t k = 0; k < dim; ++k) n *= res;
        return n;
    }();
    std::vector<double> g_at(cells);

    auto coord = [&](std::size_t k, std::size_t i) {
        return lo[k] + (hi[k] - lo[k]) * static_cast<double>(i) / static_cast<double>(res - 1);
    };

    // Evaluates the lattice, then bisects every lattice edge that crosses the
    // constraint boundary so that points on an active constraint are seen.
    auto scan = [&] {
        std::fill(idx.begin(), idx.end(), 0);
        for (std::size_t flat = 0; flat < cells; ++flat) {
            for (std::size_t k = 0; k < dim; ++k) point[k] = coord(k, idx[k]);
            const double g = problem.constraint(point);
            g_at[flat] = g;
            if (g >= 0.0) {
                const double f = problem.objective(point);
                if (std::isfinite(f)) offer(f, point);
            }
            std::size_t k = 0;
            while (k < dim && ++idx[k] == res) idx[k++] = 0;
        }

        std::fill(idx.begin(), idx.end(), 0);
        for (std::size_t flat = 0; flat < cells; ++flat) {
            std::size_t stride = 1;
            for (std::size_t k = 0; k < dim; ++k) {
                if (idx[k] + 1 < res) {
                    const double g0 = g_at[flat];
                    const double g1 = g_at[flat + stride];
                    const bool in0 = g0 >= 0.0;
                    const bool in1 = g1 >= 0.0;
                    if (in0 != in1) {
                        for (std::size_t j = 0; j < dim; ++j) point[j] = coord(j, idx[j]);
                        double inside = coord(k, idx[k] + (in0 ? 0 : 1));
                        double outside = coord(k, idx[k] + (in0 ? 1 : 0));
                        for (int it = 0; it < 60; ++it) {
                            const double mid = 0.5 * (inside + outside);
                            if (mid == inside || mid == outside) break;
                            point[k] = mid;
                            (problem.constraint(point) >= 0.0 ? inside : outside) = mid;
                        }
                        point[k] = inside;
                        const double f = problem.objective(point);
                        if (std::isfinite(f)) offer(f, point);
                    }
                }
                stride *= res;
            }
            std::size_t k = 0;
            while (k < dim && ++idx[k] == res) idx[k++] = 0;
        }
    };

    lo = problem.lower;
    hi = problem.upper;
    scan();
    if (pool.empty()) throw InfeasibleError("grid_certify(" + problem.name + "): no feasible grid point");
    level_values.push_back(pool.front().value);

    for (int level = 1; level <= cfg.refinement_levels; ++level) {
        for (double& h : half) h /= 10.0;
        auto window = [&](const std::vector<double>& centre) {
            for (std::size_t k = 0; k < dim; ++k) {
                lo[k] = std::max(problem.lower[k], centre[k] - half[k]);
                hi[k] = std::min(problem.upper[k], centre[k] + half[k]);
            }
            scan();
        };
        const std::vector<Candidate> centres = pool;
        for (const Candidate& c : centres) window(c.point);
        // Recentre on the incumbent while it keeps improving, so an optimum
        // just outside the shrunken window is still reached.
        for (int step = 0; step < kMaxRecentres; ++step) {
            const Candidate best = pool.front();
            window(best.point);
            if (!(pool.front().value > best.value)) break;
        }
        level_values.push_back(pool.front().value);
    }

    VariationalSolution sol;
    sol.maximizer = pool.front().point;
    sol.value = pool.front().value;
    sol.constraint_residual = problem.constraint(sol.maximizer);
    sol.level_values = std::move(level_values);
    return sol;
}

double gaussian_tail_bound(double x, double y, double var) {
    if (!(var > 0.0)) throw DomainError("var > 0", "gaussian_tail_bound: variance must be positive");
    if (!(y >= 0.0)) throw DomainError("y >= 0", "gaussian_tail_bound: half-width must be nonnegative");
    return std::exp(-x * x / (2.0 * var) + std::abs(x) * y / var);
}

}  // namespace lsdev::rates

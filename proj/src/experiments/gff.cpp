#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lsdev/errors.hpp"
#include "lsdev/experiments/manifest.hpp"
#include "lsdev/gff/green.hpp"
#include "lsdev/gff/harmonic.hpp"
#include "lsdev/gff/observables.hpp"
#include "lsdev/gff/partition.hpp"
#include "lsdev/gff/sampler.hpp"
#include "lsdev/mc/fit.hpp"
#include "lsdev/mc/rng.hpp"
#include "parts.hpp"

namespace lsdev::experiments::detail {

namespace m = manifest;
using report::Rule;

namespace {

int grid_size(Params& p, const std::string& key, int fallback) {
    const std::int64_t n = p.integer(key, fallback);
    if (n < 4 || n > 4096) throw ConfigError(key, "grid side must lie in [4, 4096]");
    return static_cast<int>(n);
}

std::vector<int> grid_sizes(Params& p, const std::string& key, std::vector<std::int64_t> fallback) {
    std::vector<int> out;
    for (std::int64_t n : p.integers(key, std::move(fallback))) {
        if (n < 4 || n > 4096) throw ConfigError(key, "grid side must lie in [4, 4096]");
        out.push_back(static_cast<int>(n));
    }
    if (out.empty()) throw ConfigError(key, "needs at least one size");
    return out;
}

template <std::size_t K>
std::vector<std::int64_t> as_list(const std::array<int, K>& a) {
    return {a.begin(), a.end()};
}

double kolmogorov_smirnov(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Asymptotic two-sample critical value at level 0.01.
double ks_critical(std::size_t na, std::size_t nb) {
    const double a = static_cast<double>(na), b = static_cast<double>(nb);
    return 1.6276 * std::sqrt((a + b) / (a * b));
}

double correlation(const std::vector<std::vector<double>>& rows, std::size_t i, std::size_t j) {
    double mi = 0.0, mj = 0.0;
    for (const auto& r : rows) {
        mi += r[i];
        mj += r[j];
    }
    const double n = static_cast<double>(rows.size());
    mi /= n;
    mj /= n;
    double sij = 0.0, sii = 0.0, sjj = 0.0;
    for (const auto& r : rows) {
        sij += (r[i] - mi) * (r[j] - mj);
        sii += (r[i] - mi) * (r[i] - mi);
        sjj += (r[j] - mj) * (r[j] - mj);
    }
    return sij / std::sqrt(sii * sjj);
}

}  // namespace

Prepared prepare_gff_cov(Params& p) {
    const int n = grid_size(p, "grid_n", m::kCovN);
    const auto samples = positive(p, "samples", m::kCovSamples);
    const auto entries = positive(p, "entries", m::kCovEntries);
    const auto ks_samples = positive(p, "ks_samples", m::kKsSamples);
    if (n > gff::kDenseMaxN) throw ConfigError("grid_n", "backend comparison needs grid_n <= 64");
    const std::uint64_t seed = part_seed(p, 7);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("gff-cov", 7);
        const gff::GreenOperator green(n);
        const gff::Grid& grid = green.grid();

        mc::Stream pick(mc::derive_seed(seed, 0));
        auto interior_site = [&] {
            const auto k = static_cast<int>(pick() % static_cast<std::uint64_t>((n - 2) * (n - 2)));
            return gff::Site{2 + k / (n - 2), 2 + k % (n - 2)};
        };
        std::vector<std::pair<gff::Site, gff::Site>> pairs;
        for (std::uint64_t k = 0; k < entries; ++k) {
            const gff::Site x = interior_site();
            pairs.emplace_back(x, k % 5 == 0 ? x : interior_site());
        }

        const gff::FieldSampler sampler(n);
        const auto products = mc::parallel_map(plan(samples, mc::derive_seed(seed, 1), ctx),
                                               [&](std::uint64_t s, std::size_t) {
                                                   const gff::Field f = sampler.sample(s);
                                                   std::vector<double> out;
                                                   out.reserve(pairs.size());
                                                   for (const auto& [x, y] : pairs) out.push_back(f(x) * f(y));
                                                   return out;
                                               });
        std::size_t outside = 0;
        double worst = 0.0;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            std::vector<double> v;
            v.reserve(products.size());
            for (const auto& row : products) v.push_back(row[k]);
            const mc::Estimate e = mc::summarize(v);
            const double g = green(pairs[k].first, pairs[k].second).value;
            const double z = std::abs(e.mean - g) / e.std_error;
            worst = std::max(worst, z);
            if (z > m::kCovSeTol) ++outside;
        }
        r.info("entries", static_cast<double>(pairs.size()), "random interior pairs, every fifth on the diagonal");
        r.info("max_standardized_error", worst);
        r.add(check("entries_outside_4se", static_cast<double>(outside), Rule::AtMost, 0.0, {},
                    "E Phi(x) Phi(y) = G(x, y)"));

        const gff::Site c = grid.box().centre();
        const gff::FieldSampler dense(n, gff::Backend::Dense);
        const auto spectral_values = mc::parallel_map(plan(ks_samples, mc::derive_seed(seed, 2), ctx),
                                                      [&](std::uint64_t s, std::size_t) { return sampler.sample(s)(c); });
        const auto dense_values = mc::parallel_map(plan(ks_samples, mc::derive_seed(seed, 3), ctx),
                                                   [&](std::uint64_t s, std::size_t) { return dense.sample(s)(c); });
        r.add(check("ks_spectral_vs_dense", kolmogorov_smirnov(spectral_values, dense_values), Rule::AtMost,
                    ks_critical(spectral_values.size(), dense_values.size()), {}, "two-sample KS, level 0.01", {},
                    "field at the centre, independent seeds per backend"));
        return r;
    };
}

Prepared prepare_green_growth(Params& p) {
    const std::vector<int> sizes = grid_sizes(p, "green_sizes", as_list(m::kGreenSizes));
    if (sizes.size() < 2) throw ConfigError("green_sizes", "needs at least two sizes");

    return [=](const RunContext&) {
        report::Report r = make_report("green-growth", 8);
        std::vector<std::pair<double, double>> points;
        for (int n : sizes) {
            const gff::GreenOperator green(n);
            const gff::Site c = green.grid().box().centre();
            const double g = green(c, c).value;
            r.info("n" + std::to_string(n) + ".centre_green", g);
            points.emplace_back(std::log(static_cast<double>(n)), g);
        }
        const mc::ExponentFit fit = mc::fit_exponent(points);
        r.add(check("slope_in_log_n", fit.slope, Rule::RelWithin, 2.0 / std::numbers::pi, m::kGreenRelTol, "2/pi",
                    std::isfinite(fit.slope_stderr) ? std::optional<double>(fit.slope_stderr) : std::nullopt));
        r.info("intercept", fit.intercept);
        return r;
    };
}

Prepared prepare_daviaud(Params& p) {
    const double eta = p.real("eta");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta", "must lie in (0, 1)");
    const int moment_n = grid_size(p, "moment_n", m::kDaviaudMomentN);
    const auto moment_replicas = positive(p, "moment_replicas", m::kDaviaudMomentReplicas);
    const std::vector<int> sizes = grid_sizes(p, "grid_n", as_list(m::kDaviaudSizes));
    const auto replicas = positive(p, "replicas", m::kDaviaudReplicas);
    const double tol = p.real("tolerance", m::kDaviaudTol);
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) throw ConfigError("grid_n", "sizes must be strictly increasing");
    }
    const std::uint64_t seed = part_seed(p, 9);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("daviaud", 9);

        const gff::GreenOperator green(moment_n);
        const std::vector<double>& diag = green.diagonal();
        double cross = 0.0;
        for (int k = 0; k < 8; ++k) {
            const gff::Site x{2 + k * (moment_n - 3) / 7, 2 + ((k * 5) % 8) * (moment_n - 3) / 7};
            cross = std::max(cross, std::abs(diag[green.grid().index(x)] - green(x, x).value));
        }
        r.add(check("green_diagonal_spectral_vs_solve", cross, Rule::AtMost, 1e-9, {}, {}, {},
                    "max over 8 sites"));
        const double expected = gff::expected_level_count(green, eta);
        const gff::DaviaudSweep moment =
            gff::estimate_daviaud_exponent({moment_n}, eta, plan(moment_replicas, mc::derive_seed(seed, 0), ctx));
        const mc::Estimate& count = moment.points.front().count;
        r.add(check("first_moment_n" + std::to_string(moment_n), count.mean, Rule::SeWithin, expected,
                    m::kDaviaudMomentSeTol, "sum_x P(Z >= threshold / sqrt G(x, x))", count.std_error));

        const gff::DaviaudSweep sweep =
            gff::estimate_daviaud_exponent(sizes, eta, plan(replicas, mc::derive_seed(seed, 1), ctx));
        for (const gff::DaviaudPoint& pt : sweep.points) {
            r.add(estimate("n" + std::to_string(pt.n) + ".exponent", pt.exponent.mean, pt.exponent.std_error,
                           pt.low_confidence ? "low confidence: many empty level sets" : ""));
        }
        r.add(holds("exponent_increasing_in_n", sweep.increasing));
        const gff::DaviaudPoint& last = sweep.points.back();
        r.add(check("exponent_n" + std::to_string(last.n), last.exponent.mean, Rule::AbsWithin, sweep.limit, tol,
                    "2(1 - eta^2)", last.exponent.std_error));
        r.info("fit_slope", sweep.fit.slope, "mean log count against log N");
        return r;
    };
}

namespace {

// Every site of `region` lies in exactly one box.
bool exact_tiling(const gff::Box& region, const std::vector<gff::Box>& boxes) {
    std::vector<int> hits(region.size(), 0);
    for (const gff::Box& b : boxes) {
        if (!region.contains(b)) return false;
        for (int i = b.row0; i < b.row0 + b.rows; ++i) {
            for (int j = b.col0; j < b.col0 + b.cols; ++j) {
                ++hits[static_cast<std::size_t>(i - region.row0) * static_cast<std::size_t>(region.cols) +
                       static_cast<std::size_t>(j - region.col0)];
            }
        }
    }
    return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

// Sites of the core covered by the finest starred boxes translated by the shifts.
std::size_t covered(const gff::NestedPartitions& np, const std::vector<gff::Site>& shifts) {
    const gff::Box core = gff::Grid(np.n).core();
    std::vector<char> mark(core.size(), 0);
    for (const gff::Site& s : shifts) {
        for (const gff::Box& b : np.levels.back()) {
            for (int i = b.row0; i < b.row0 + b.rows; ++i) {
                for (int j = b.col0; j < b.col0 + b.cols; ++j) {
                    const gff::Site x{i + s.row, j + s.col};
                    if (core.contains(x)) {
                        mark[static_cast<std::size_t>(x.row - core.row0) * static_cast<std::size_t>(core.cols) +
                             static_cast<std::size_t>(x.col - core.col0)] = 1;
                    }
                }
            }
        }
    }
    return static_cast<std::size_t>(std::count(mark.begin(), mark.end(), 1));
}

}  // namespace

Prepared prepare_cover_check(Params& p) {
    const int margin_n = grid_size(p, "margin_n", m::kMarginN);
    const std::vector<int> sizes = grid_sizes(p, "grid_n", as_list(m::kCoverSizes));
    const std::vector<std::int64_t> levels =
        p.integers("levels", std::vector<std::int64_t>(m::kCoverLevels.begin(), m::kCoverLevels.end()));
    const double delta = p.real("delta", m::kScheduleDelta);
    const double rho = p.real("rho", m::kScheduleRho);
    for (std::int64_t l : levels) {
        if (l < 1 || l > 8) throw ConfigError("levels", "each level count must lie in [1, 8]");
    }
    gff::validate(gff::make_schedule(margin_n, delta, 1, rho));

    return [=](const RunContext&) {
        report::Report r = make_report("cover-check", 10);

        const gff::Schedule ms = gff::make_schedule(margin_n, delta, 0, rho);
        const gff::NestedPartitions mp = gff::build_partitions(margin_n, ms);
        bool margin = true;
        for (int i = 1; i <= mp.depth(); ++i) {
            for (std::size_t k = 0; k < mp.levels[i].size(); ++k) {
                const gff::Box& d = mp.levels[i - 1][mp.parent[i][k]];
                margin = margin && 8 * d.boundary_distance(mp.levels[i][k]) >= 3 * d.side();
            }
        }
        const std::string mtag = "margin_n" + std::to_string(margin_n);
        r.add(holds(mtag + ".every_box_keeps_margin", margin && gff::margin_rule_holds(mp), "8 dist >= 3 |D|"));
        bool tilings = true;
        const gff::Grid mg(margin_n);
        for (double s : ms.s) {
            tilings = tilings && exact_tiling(mg.core(), gff::flat_partition(margin_n, s, gff::Base::Core)) &&
                      exact_tiling(mg.box(), gff::flat_partition(margin_n, s, gff::Base::Full));
        }
        r.add(holds(mtag + ".flat_tilings_exact", tilings));

        for (int n : sizes) {
            for (std::int64_t l : levels) {
                const std::string tag = "n" + std::to_string(n) + "_L" + std::to_string(l);
                const gff::Schedule sched = gff::make_schedule(n, delta, static_cast<int>(l), rho);
                gff::NestedPartitions np;
                try {
                    np = gff::build_partitions(n, sched);
                } catch (const EmptyLevelError& e) {
                    r.info(tag + ".empty_level", e.level(), e.what());
                    continue;
                }
                const std::size_t target = gff::Grid(n).core().size();
                const gff::ShiftCover hc = gff::shift_cover(np, gff::CoverMethod::Hierarchical, true);
                const std::size_t finest = np.levels.back().size();
                r.info(tag + ".finest_starred_boxes", static_cast<double>(finest));
                r.info(tag + ".shifts", static_cast<double>(hc.shifts.size()));
                r.add(check(tag + ".constructed_cover_sites", static_cast<double>(covered(np, hc.shifts)),
                            Rule::AtLeast, static_cast<double>(target), {}, "every site of the core", {},
                            "checked site by site"));
                r.add(check(tag + ".shift_sup_norm", hc.max_norm, Rule::AtMost, n / 4.0, {}, "N/4"));

                const gff::ShiftCover fc = gff::shift_cover(np, gff::CoverMethod::TwoPerAxis, true);
                r.add(check(tag + ".four_per_level_cover_sites", static_cast<double>(covered(np, fc.shifts)),
                            Rule::AtLeast, static_cast<double>(target), {}, "4^L shifts cover the core", {},
                            std::to_string(fc.shifts.size()) + " shifts" +
                                (fc.uncovered ? ", first uncovered site (" + std::to_string(fc.uncovered->row) + ", " +
                                                    std::to_string(fc.uncovered->col) + ")"
                                              : std::string())));

                const double flat = static_cast<double>(gff::flat_partition(n, sched.s.back(), gff::Base::Core).size());
                r.add(check(tag + ".starred_count_vs_4^-L_flat", static_cast<double>(finest), Rule::AtLeast,
                            flat * std::pow(4.0, -static_cast<double>(l)), {}, "4^-L times the flat count"));
                r.add(check(tag + ".flat_count_vs_shifts_times_starred", flat, Rule::AtMost,
                            static_cast<double>(hc.shifts.size() * finest), {}, "#shifts times #starred"));
            }
        }
        return r;
    };
}

Prepared prepare_harmonic(Params& p) {
    const int n = grid_size(p, "grid_n", m::kHarmonicN);
    const auto samples = positive(p, "samples", m::kHarmonicSamples);
    const int corr_box = grid_size(p, "corr_box", m::kHarmonicCorrelationBox);
    const double delta = p.real("delta", m::kScheduleDelta);
    const double rho = p.real("rho", m::kScheduleRho);
    const auto forced = static_cast<int>(p.integer("levels", 0));
    const double tol = p.real("tolerance", m::kHarmonicVarRelTol);
    if (corr_box + 2 > n) throw ConfigError("corr_box", "must fit inside the grid");
    if (forced < 0) throw ConfigError("levels", "must be nonnegative");
    const gff::Schedule sched = gff::make_schedule(n, delta, forced, rho);
    gff::validate(sched);
    const std::uint64_t seed = part_seed(p, 11);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("harmonic", 11);
        const gff::NestedPartitions np = gff::build_partitions(n, sched);
        const gff::Box core = np.levels[0][0];
        const std::size_t children = np.levels[1].size();

        const int c0 = (n - corr_box) / 2 + 1;
        const gff::Box cbox{c0, c0, corr_box, corr_box};
        std::vector<gff::Site> inside{cbox.centre(), {c0 + 1, c0 + 1}, {c0 + corr_box - 2, c0 + 1},
                                      {c0 + corr_box / 3, c0 + corr_box - 2}};
        std::vector<gff::Site> rim;
        for (int i = cbox.row0; i < cbox.row0 + cbox.rows; ++i) {
            for (int j = cbox.col0; j < cbox.col0 + cbox.cols; ++j) {
                if (cbox.on_boundary({i, j})) rim.push_back({i, j});
            }
        }

        const gff::FieldSampler sampler(n);
        // [core residual, box residual, increments..., Phi^D' inside..., Phi on the rim...]
        const auto rows = mc::parallel_map(plan(samples, seed, ctx), [&](std::uint64_t s, std::size_t) {
            const gff::Field f = sampler.sample(s);
            const gff::HarmonicDecomposition dc = gff::decompose(f, core);
            const gff::HarmonicDecomposition db = gff::decompose(f, cbox);
            std::vector<double> out{dc.residual_norm, db.residual_norm};
            std::vector<double> inc(children, 0.0);
            for (const gff::Increment& e : gff::coarse_increments(f, np, 0)) inc[e.child] = e.value;
            out.insert(out.end(), inc.begin(), inc.end());
            for (const gff::Site& x : inside) out.push_back(db.residual(x));
            for (const gff::Site& y : rim) out.push_back(f(y));
            return out;
        });

        double residual = 0.0;
        for (const auto& row : rows) residual = std::max({residual, row[0], row[1]});
        r.add(check("max_laplacian_residual", residual, Rule::AtMost, m::kHarmonicResidualTol, {},
                    "discrete mean-value property"));

        const std::size_t first_inside = 2 + children;
        const std::size_t first_rim = first_inside + inside.size();
        double corr = 0.0;
        for (std::size_t a = 0; a < inside.size(); ++a) {
            for (std::size_t b = 0; b < rim.size(); ++b) {
                corr = std::max(corr, std::abs(correlation(rows, first_inside + a, first_rim + b)));
            }
        }
        r.add(check("max_abs_correlation_with_boundary", corr, Rule::AtMost,
                    m::kHarmonicCorrelationFactor / std::sqrt(static_cast<double>(rows.size())), {},
                    "Phi^D independent of the boundary values", {},
                    std::to_string(inside.size() * rim.size()) + " pairs"));

        const double anchor = (2.0 / std::numbers::pi) * (sched.s[0] - sched.s[1]) * std::log(static_cast<double>(n));
        const gff::GreenOperator box_green(core.rows);
        double worst_var = anchor, worst_gap = -1.0, exact_sum = 0.0, var_sum = 0.0;
        for (std::size_t k = 0; k < children; ++k) {
            std::vector<double> v;
            v.reserve(rows.size());
            for (const auto& row : rows) v.push_back(row[2 + k]);
            const mc::Estimate e = mc::summarize(v);
            double second = 0.0;
            for (double x : v) second += (x - e.mean) * (x - e.mean);
            const double var = second / static_cast<double>(v.size() - 1);
            var_sum += var;
            const gff::Site xb = np.levels[1][k].centre();
            exact_sum += box_green.diagonal()[box_green.grid().index({xb.row - core.row0 + 1, xb.col - core.col0 + 1})];
            if (std::abs(var - anchor) > worst_gap) {
                worst_gap = std::abs(var - anchor);
                worst_var = var;
            }
        }
        const double kids = static_cast<double>(children);
        r.info("children", kids);
        r.info("mean_increment_variance", var_sum / kids);
        r.info("mean_box_green_at_centres", exact_sum / kids, "exact variance for singleton children");
        r.add(check("worst_increment_variance", worst_var, Rule::RelWithin, anchor, tol,
                    "(2/pi)(s_0 - s_1) log N"));
        return r;
    };
}

Prepared prepare_coarse_tail(Params& p) {
    const double zeta = p.real("zeta", m::kProbeZeta);
    const double b = p.real("b", m::kProbeB);
    const std::vector<int> sizes = grid_sizes(p, "grid_n", as_list(m::kProbeSizes));
    const auto replicas = positive(p, "replicas", m::kProbeReplicas);
    const double tol = p.real("tolerance", m::kProbeTol);
    if (!(zeta >= 0.0 && zeta < 1.0)) throw ConfigError("zeta", "must lie in [0, 1)");
    if (!(b > 1.0 - zeta)) throw ConfigError("b", "must exceed 1 - zeta");
    const std::uint64_t seed = part_seed(p, 12);

    return [=](const RunContext& ctx) {
        report::Report r = make_report("coarse-tail", 12);
        std::vector<gff::CoarseProbe> probes;
        std::vector<double> ses;
        for (int n : sizes) {
            const gff::CoarseProbe pr =
                gff::coarse_exceedance_probe(n, zeta, b, plan(replicas, mc::derive_seed(seed, n), ctx));
            const double ph = pr.probability.p_hat;
            const double se = ph > 0.0 ? pr.probability.std_error / (ph * std::log(static_cast<double>(n))) : std::nan("");
            const std::string tag = "n" + std::to_string(n);
            r.add(estimate(tag + ".probability", ph, pr.probability.std_error));
            r.info(tag + ".predicted_probability", pr.predicted_probability);
            r.add(estimate(tag + ".decay", pr.decay, se, "-log p / log N"));
            r.info(tag + ".boxes", static_cast<double>(pr.boxes));
            probes.push_back(pr);
            ses.push_back(se);
        }
        const double target = probes.front().predicted_decay;
        const gff::CoarseProbe& last = probes.back();
        const bool within = std::abs(last.decay - target) <= tol;
        report::Entry w = check("decay_n" + std::to_string(last.n) + "_gap", std::abs(last.decay - target), Rule::None,
                                0.0, tol, "-2[(1-zeta) - b^2/(1-zeta)]");
        w.note = "clause 1: gap within tolerance";
        r.add(w);
        bool trending = false;
        if (probes.size() >= 2) {
            const double improvement = std::abs(probes.front().decay - target) - std::abs(last.decay - target);
            const double noise = 2.0 * std::hypot(ses.front(), ses.back());
            trending = std::isfinite(noise) && improvement > noise;
            report::Entry t = check("gap_improvement", improvement, Rule::None, noise);
            t.std_error = noise / 2.0;
            t.note = "clause 2: gap shrinks by more than twice its standard error";
            r.add(t);
        }
        r.add(holds("decay_within_tolerance_or_trending", within || trending,
                    within ? "within tolerance" : (trending ? "trending toward the prediction" : "")));
        return r;
    };
}

}  // namespace lsdev::experiments::detail

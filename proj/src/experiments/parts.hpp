#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lsdev/experiments/experiments.hpp"
#include "lsdev/mc/replicas.hpp"
#include "lsdev/report/report.hpp"

namespace lsdev::experiments::detail {

Prepared prepare_rates(Params& p);
Prepared prepare_gw_verify(Params& p);
Prepared prepare_bbm_first_moment(Params& p);
Prepared prepare_bbm_biggins(Params& p);
Prepared prepare_bbm_max_ldp(Params& p);
Prepared prepare_bbm_events(Params& p);
Prepared prepare_nbbm(Params& p);
Prepared prepare_gff_cov(Params& p);
Prepared prepare_green_growth(Params& p);
Prepared prepare_daviaud(Params& p);
Prepared prepare_cover_check(Params& p);
Prepared prepare_harmonic(Params& p);
Prepared prepare_coarse_tail(Params& p);

/// Master seed of a part: derive_seed(seed, salt).
std::uint64_t part_seed(Params& p, std::uint64_t salt);

/// Reads a positive count.
std::uint64_t positive(Params& p, const std::string& key, std::uint64_t fallback);

inline mc::ReplicaPlan plan(std::uint64_t replicas, std::uint64_t seed, const RunContext& ctx) {
    return {static_cast<std::size_t>(replicas), seed, ctx.threads};
}

inline report::Report make_report(std::string name, std::optional<int> criterion) {
    report::Report r;
    r.experiment = std::move(name);
    r.criterion = criterion;
    return r;
}

inline report::Entry check(std::string name, double value, report::Rule rule, double reference,
                           std::optional<double> tolerance = std::nullopt, std::string anchor = {},
                           std::optional<double> std_error = std::nullopt, std::string note = {}) {
    report::Entry e;
    e.name = std::move(name);
    e.value = value;
    e.rule = rule;
    e.reference = reference;
    e.tolerance = tolerance;
    e.anchor = std::move(anchor);
    e.std_error = std_error;
    e.note = std::move(note);
    return e;
}

inline report::Entry holds(std::string name, bool ok, std::string note = {}) {
    report::Entry e;
    e.name = std::move(name);
    e.value = ok ? 1.0 : 0.0;
    e.rule = report::Rule::Holds;
    e.note = std::move(note);
    return e;
}

/// Informational estimate with its standard error.
inline report::Entry estimate(std::string name, double value, double std_error, std::string note = {}) {
    report::Entry e;
    e.name = std::move(name);
    e.value = value;
    e.std_error = std_error;
    e.note = std::move(note);
    return e;
}

}  // namespace lsdev::experiments::detail

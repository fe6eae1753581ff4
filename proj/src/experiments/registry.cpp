#include <set>

#include "lsdev/experiments/experiments.hpp"
#include "lsdev/mc/rng.hpp"
#include "parts.hpp"

namespace lsdev::experiments {

namespace detail {

std::uint64_t part_seed(Params& p, std::uint64_t salt) { return mc::derive_seed(p.count("seed"), salt); }

std::uint64_t positive(Params& p, const std::string& key, std::uint64_t fallback) {
    const std::uint64_t v = p.count(key, fallback);
    if (v == 0) throw ConfigError(key, "must be at least 1");
    return v;
}

}  // namespace detail

const std::vector<Part>& parts() {
    using namespace detail;
    static const std::vector<Part> all{
        {"rates", 1, "closed-form rate functions against the grid certifier", prepare_rates},
        {"gw-verify", 2, "Galton-Watson exceedance bound against simulation and exact laws", prepare_gw_verify},
        {"bbm-first-moment", 3, "BBM population and level counts against their means", prepare_bbm_first_moment},
        {"bbm-biggins", 4, "growth exponent of the BBM level set", prepare_bbm_biggins},
        {"bbm-max-ldp", 5, "large deviation rate of the BBM maximum", prepare_bbm_max_ldp},
        {"bbm-events", std::nullopt, "frequency of the lineage discretization events", prepare_bbm_events},
        {"nbbm", 6, "coupled N-BBM stays below BBM", prepare_nbbm},
        {"gff-cov", 7, "DGFF sampler covariance and backend agreement", prepare_gff_cov},
        {"green-growth", 8, "logarithmic growth of the Green's function", prepare_green_growth, false},
        {"daviaud", 9, "DGFF level-set first moment and exponent", prepare_daviaud},
        {"cover-check", 10, "starred partitions, margin rule and shift cover", prepare_cover_check, false},
        {"harmonic", 11, "harmonic decomposition and coarse increments", prepare_harmonic},
        {"coarse-tail", 12, "coarse exceedance probability decay", prepare_coarse_tail},
    };
    return all;
}

const Part* find_part(std::string_view name) {
    for (const Part& p : parts()) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

const std::vector<Subcommand>& subcommands() {
    static const std::vector<Subcommand> all{
        {"rates", "rate functions and their certification", {"rates"}},
        {"gw-verify", "Galton-Watson exceedance bound sweep", {"gw-verify"}},
        {"bbm-exponents", "BBM first moment, level-set exponent, maximum tail and discretization events",
         {"bbm-first-moment", "bbm-biggins", "bbm-max-ldp", "bbm-events"}},
        {"nbbm", "N-BBM coupling", {"nbbm"}},
        {"gff-cov", "DGFF sampler covariance and Green's function growth", {"gff-cov", "green-growth"}},
        {"daviaud", "DGFF level sets", {"daviaud"}},
        {"coarse-tail", "coarse exceedance probe", {"coarse-tail"}},
        {"cover-check", "partitions and shift cover", {"cover-check"}},
        {"harmonic", "harmonic decomposition", {"harmonic"}},
    };
    return all;
}

const Subcommand* find_subcommand(std::string_view name) {
    for (const Subcommand& s : subcommands()) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

namespace {

struct Configured {
    const Part* part;
    Prepared run;
    std::vector<std::pair<std::string, std::string>> inputs;
};

std::vector<Configured> configure(const std::vector<std::string_view>& names, const Params& params) {
    std::vector<Configured> out;
    std::set<std::string> used;
    for (std::string_view name : names) {
        const Part* part = find_part(name);
        if (!part) throw std::invalid_argument("unknown experiment part '" + std::string(name) + "'");
        Params view = params.unread();
        Prepared run = part->prepare(view);
        for (const auto& [k, v] : view.echo()) used.insert(k);
        out.push_back({part, std::move(run), view.echo()});
    }
    for (const std::string& k : params.keys()) {
        if (used.count(k) == 0) throw ConfigError(k, "unknown parameter for this subcommand");
    }
    return out;
}

report::Report execute(Configured& c, const RunContext& ctx) {
    report::Report r = c.run(ctx);
    r.experiment = std::string(c.part->name);
    r.criterion = c.part->criterion;
    r.inputs = c.inputs;
    return r;
}

}  // namespace

report::Report run_part(std::string_view name, Params& params, const RunContext& ctx) {
    std::vector<Configured> cs = configure({name}, params);
    return execute(cs.front(), ctx);
}

report::Report run_subcommand(std::string_view name, Params& params, const RunContext& ctx) {
    const Subcommand* sub = find_subcommand(name);
    if (!sub) throw std::invalid_argument("unknown subcommand '" + std::string(name) + "'");
    std::vector<Configured> cs = configure(sub->parts, params);
    if (cs.size() == 1) {
        report::Report r = execute(cs.front(), ctx);
        r.experiment = std::string(sub->name);
        return r;
    }
    report::Report out;
    out.experiment = std::string(sub->name);
    std::set<std::pair<std::string, std::string>> inputs;
    for (Configured& c : cs) {
        const report::Report r = execute(c, ctx);
        out.merge(r, r.experiment);
        inputs.insert(r.inputs.begin(), r.inputs.end());
    }
    out.inputs.assign(inputs.begin(), inputs.end());
    return out;
}

}  // namespace lsdev::experiments

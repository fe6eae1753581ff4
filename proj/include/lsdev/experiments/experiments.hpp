#pragma once

/**
 * Experiments behind the command-line subcommands and the acceptance runner.
 *
 * A part is one self-contained experiment producing a Report; most parts
 * implement one acceptance criterion with the configuration in manifest.hpp
 * as defaults. A subcommand runs one or more parts on a shared parameter set.
 * Each part derives its master seed as derive_seed(seed, part salt), so a
 * part gives the same report whether run alone or inside a subcommand, and
 * reports never depend on the thread count.
 */

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsdev/experiments/params.hpp"
#include "lsdev/report/report.hpp"

namespace lsdev::experiments {

struct RunContext {
    /// Worker threads for replica loops; 0 selects the hardware concurrency.
    std::size_t threads = 0;
};

/// A configured experiment, ready to run.
using Prepared = std::function<report::Report(const RunContext&)>;
/// Reads and validates every parameter of a part; no sampling happens here.
using PrepareFn = Prepared (*)(Params&);

struct Part {
    std::string_view name;
    std::optional<int> criterion;
    std::string_view summary;
    PrepareFn prepare;
    bool randomized = true;  ///< reads a required `seed`
};

const std::vector<Part>& parts();
const Part* find_part(std::string_view name);

struct Subcommand {
    std::string_view name;
    std::string_view summary;
    std::vector<std::string_view> parts;
};

const std::vector<Subcommand>& subcommands();
const Subcommand* find_subcommand(std::string_view name);

/// Runs a part and rejects unknown parameters. Parameter errors raise
/// ConfigError before any sampling starts.
report::Report run_part(std::string_view name, Params& params, const RunContext& ctx);

/// Runs every part of a subcommand on one parameter set; a single-part
/// subcommand returns the part's report unchanged apart from its name.
report::Report run_subcommand(std::string_view name, Params& params, const RunContext& ctx);

}  // namespace lsdev::experiments

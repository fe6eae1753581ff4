// Command-line front end: one subcommand per experiment group.
//
// Exit codes: 0 every check passed, 1 a check failed, 2 usage or
// configuration error, 3 runtime error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsdev/errors.hpp"
#include "lsdev/experiments/experiments.hpp"
#include "lsdev/experiments/params.hpp"
#include "lsdev/report/report.hpp"

namespace {

namespace ex = lsdev::experiments;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

int diagnose(int code, const std::string& kind, const std::string& field, const std::string& message) {
    nlohmann::ordered_json d;
    d["error"] = kind;
    d["field"] = field;
    d["message"] = message;
    std::cerr << d.dump() << '\n';
    return code;
}

struct Options {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::size_t threads = 0;
    std::vector<std::string> assignments;
    // flag name -> parameter key, filled only when given
    std::map<std::string, std::string> flags;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-set large deviation experiments"};
    app.require_subcommand(1);
    Options opt;

    const std::vector<std::pair<std::string, std::string>> value_flags{
        {"seed", "seed"}, {"replicas", "replicas"}, {"x", "x"},         {"a", "a"},
        {"eta", "eta"},   {"zeta", "zeta"},         {"b", "b"},         {"t", "t"},
        {"grid-n", "grid_n"}, {"delta", "delta"},   {"delta-prime", "delta_prime"},
    };

    std::string chosen;
    for (const ex::Subcommand& sub : ex::subcommands()) {
        CLI::App* s = app.add_subcommand(std::string(sub.name), std::string(sub.summary));
        s->add_option("--config", opt.config, "key=value file; flags override it");
        s->add_option("--out", opt.out, "report path (default: stdout)");
        s->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--threads", opt.threads, "worker threads, 0 for all cores; never affects results");
        s->add_option("--set", opt.assignments, "extra parameter as key=value (repeatable)");
        for (const auto& [flag, key] : value_flags) {
            s->add_option_function<std::string>(
                "--" + flag, [&opt, k = key](const std::string& v) { opt.flags[k] = v; },
                "parameter '" + key + "'");
        }
        s->callback([&chosen, name = std::string(sub.name)] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return diagnose(kExitUsage, "usage", "", e.what());
    }

    try {
        ex::Params params;
        if (!opt.config.empty()) params.load_file(opt.config);
        for (const std::string& a : opt.assignments) params.set_assignment(a);
        for (const auto& [k, v] : opt.flags) params.set(k, v);
        const lsdev::report::Format format = lsdev::report::parse_format(opt.format);

        const auto start = std::chrono::steady_clock::now();
        const lsdev::report::Report r = ex::run_subcommand(chosen, params, {opt.threads});
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (opt.out.empty()) {
            std::cout << lsdev::report::render(r, format);
        } else {
            lsdev::report::write(r, format, opt.out);
        }
        std::cerr << chosen << ": " << r.checks() << " checks, " << r.failures() << " failed, "
                  << elapsed << " s\n";
        return r.pass() ? 0 : kExitFail;
    } catch (const ex::ConfigError& e) {
        return diagnose(kExitUsage, "config", e.field(), e.what());
    } catch (const lsdev::DomainError& e) {
        return diagnose(kExitUsage, "domain", e.bound(), e.what());
    } catch (const std::exception& e) {
        return diagnose(kExitRuntime, "runtime", "", e.what());
    }
}

// Acceptance runner: one line per criterion,
//   criterion K: PASS|FAIL <title> (<seconds> s / budget <seconds> s)
// Reports go to --report-dir as criterion_K.csv and criterion_K.json.
// Criterion 13 reruns 1-12 at another concurrency and compares bytes.
// With --expect-failures the exit status is 0 only if the failed entries of
// the criterion are exactly the listed ones; the line still says FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsdev/experiments/experiments.hpp"
#include "lsdev/experiments/manifest.hpp"
#include "lsdev/report/report.hpp"
#include "lsdev/report/schema.hpp"

namespace {

namespace ex = lsdev::experiments;
namespace rp = lsdev::report;
namespace fs = std::filesystem;

constexpr std::uint64_t kSeed = 20240601;

struct Rendered {
    std::string csv;
    std::string json;
    bool pass = false;
    std::vector<std::string> problems;
};

Rendered run_criterion(const ex::manifest::Criterion& c, std::size_t threads) {
    ex::Params params;
    const ex::Part* part = ex::find_part(c.part);
    if (part && part->randomized) params.set("seed", std::to_string(kSeed));
    if (c.part == "daviaud") params.set("eta", std::to_string(ex::manifest::kDaviaudEta));
    const rp::Report r = ex::run_part(c.part, params, {threads});
    Rendered out{rp::to_csv(r), rp::to_json(r), r.pass(), {}};
    for (const rp::Entry& e : r.entries) {
        if (e.pass == false) out.problems.push_back(e.name);
    }
    for (const std::string& s : rp::validate_schema(rp::report_schema(), nlohmann::json::parse(out.json))) {
        out.problems.push_back("schema " + s);
        out.pass = false;
    }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    out << s;
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

fs::path report_path(const fs::path& dir, int id, const char* ext) {
    return dir / ("criterion_" + std::to_string(id) + ext);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> wanted;
    std::string report_dir = "acceptance_reports";
    std::size_t threads = 1;
    std::size_t recheck_threads = 3;
    std::vector<std::string> expected_failures;
    app.add_option("--criterion", wanted, "criterion id (repeatable; default all)")->check(CLI::Range(1, 13));
    app.add_option("--report-dir", report_dir, "where reports are written");
    app.add_option("--threads", threads, "concurrency of the base runs");
    app.add_option("--recheck-threads", recheck_threads, "concurrency of the determinism reruns");
    app.add_option("--expect-failures", expected_failures, "entries known to fail (exact set)")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    std::set<int> ids(wanted.begin(), wanted.end());
    if (ids.empty()) {
        for (const auto& c : ex::manifest::kCriteria) ids.insert(c.id);
    }
    const fs::path dir(report_dir);
    fs::create_directories(dir);

    bool all = true;
    for (const auto& c : ex::manifest::kCriteria) {
        if (!ids.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        bool pass = true;
        std::vector<std::string> problems;
        try {
            if (c.id != 13) {
                const Rendered r = run_criterion(c, threads);
                spit(report_path(dir, c.id, ".csv"), r.csv);
                spit(report_path(dir, c.id, ".json"), r.json);
                pass = r.pass;
                problems = r.problems;
            } else {
                for (const auto& base : ex::manifest::kCriteria) {
                    if (base.id == 13) continue;
                    const fs::path csv = report_path(dir, base.id, ".csv");
                    const fs::path json = report_path(dir, base.id, ".json");
                    if (!fs::exists(csv) || !fs::exists(json)) {
                        const Rendered r = run_criterion(base, threads);
                        spit(csv, r.csv);
                        spit(json, r.json);
                    }
                    const Rendered again = run_criterion(base, recheck_threads);
                    if (again.csv != slurp(csv) || again.json != slurp(json)) {
                        pass = false;
                        problems.push_back("criterion " + std::to_string(base.id) + " differs at " +
                                           std::to_string(recheck_threads) + " threads");
                    }
                }
            }
        } catch (const std::exception& e) {
            pass = false;
            problems.push_back(std::string("error: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0 && seconds > c.budget_seconds) {
            pass = false;
            problems.push_back("over the runtime budget");
        }
        char timing[96];
        if (c.budget_seconds > 0.0) {
            std::snprintf(timing, sizeof timing, "(%.1f s / budget %.0f s)", seconds, c.budget_seconds);
        } else {
            std::snprintf(timing, sizeof timing, "(%.1f s)", seconds);
        }
        std::cout << "criterion " << c.id << ": " << (pass ? "PASS " : "FAIL ") << c.title << ' ' << timing << '\n';
        for (const std::string& p : problems) std::cout << "    " << p << '\n';
        bool ok = pass;
        if (!expected_failures.empty()) {
            const std::set<std::string> want(expected_failures.begin(), expected_failures.end());
            const std::set<std::string> got(problems.begin(), problems.end());
            ok = !pass && want == got;
            std::cout << "    known failure " << (ok ? "reproduced exactly" : "NOT reproduced") << '\n';
        }
        std::cout.flush();
        all = all && ok;
    }
    return all ? 0 : 1;
}

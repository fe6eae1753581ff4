#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "lsdev/experiments/experiments.hpp"
#include "lsdev/experiments/params.hpp"
#include "lsdev/report/report.hpp"
#include "lsdev/report/schema.hpp"

using namespace lsdev;
using report::Entry;
using report::Report;
using report::Rule;

namespace {

Entry make(double value, Rule rule, std::optional<double> reference, std::optional<double> tol = std::nullopt,
           std::optional<double> se = std::nullopt) {
    Entry e;
    e.name = "e";
    e.value = value;
    e.rule = rule;
    e.reference = reference;
    e.tolerance = tol;
    e.std_error = se;
    return e;
}

std::size_t lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Judge, Rules) {
    EXPECT_TRUE(*report::judge(make(1.05, Rule::AbsWithin, 1.0, 0.1)).pass);
    EXPECT_FALSE(*report::judge(make(1.2, Rule::AbsWithin, 1.0, 0.1)).pass);
    EXPECT_TRUE(*report::judge(make(-2.1, Rule::RelWithin, -2.0, 0.1)).pass);
    EXPECT_FALSE(*report::judge(make(1.0, Rule::SeWithin, 0.0, 3.0, 0.2)).pass);
    EXPECT_TRUE(*report::judge(make(0.5, Rule::SeWithin, 0.0, 3.0, 0.2)).pass);
    EXPECT_TRUE(*report::judge(make(1.0, Rule::AtMost, 1.0)).pass);
    EXPECT_FALSE(*report::judge(make(1.0, Rule::AtLeast, 1.5)).pass);
    EXPECT_TRUE(*report::judge(make(1.0, Rule::Holds, std::nullopt)).pass);
    EXPECT_FALSE(report::judge(make(1.0, Rule::None, 0.0)).pass.has_value());
}

TEST(Judge, MissingNumbersFail) {
    EXPECT_FALSE(*report::judge(make(1.0, Rule::AbsWithin, std::nullopt, 0.1)).pass);
    EXPECT_FALSE(*report::judge(make(std::nan(""), Rule::AtMost, 1.0)).pass);
    EXPECT_FALSE(*report::judge(make(0.0, Rule::SeWithin, 0.0, 3.0)).pass);
}

TEST(Csv, EmptyReportIsHeaderOnly) {
    const std::string csv = report::to_csv(Report{});
    EXPECT_EQ(csv, "name,value,std_error,reference,tolerance,rule,anchor,pass,note\n");
}

TEST(Csv, OneEstimateIsTwoLines) {
    Report r;
    r.info("mean", 0.1, "a, quoted \"note\"");
    const std::string csv = report::to_csv(r);
    EXPECT_EQ(lines(csv), 2u);
    EXPECT_NE(csv.find("mean,0.1,,,,none,,,\"a, quoted \"\"note\"\"\"\n"), std::string::npos);
}

TEST(Numbers, ShortestRoundTrip) {
    EXPECT_EQ(report::format_number(0.1), "0.1");
    EXPECT_EQ(report::format_number(1e-300), "1e-300");
    EXPECT_EQ(report::format_number(std::numeric_limits<double>::infinity()), "inf");
    for (double v : {1.0 / 3.0, 2.718281828459045, -1e17, 5e-324}) {
        const std::string text = report::format_number(v);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        EXPECT_EQ(back, v) << text;
    }
}

TEST(Json, ValidatesAgainstSchema) {
    Report r;
    r.experiment = "demo";
    r.criterion = 3;
    r.inputs = {{"seed", "1"}, {"alpha", "2"}};
    r.add(make(1.0, Rule::AbsWithin, 1.0, 0.1));
    r.info("unbounded", std::numeric_limits<double>::infinity());
    const nlohmann::json doc = nlohmann::json::parse(report::to_json(r));
    EXPECT_TRUE(report::validate_schema(report::report_schema(), doc).empty());
    EXPECT_EQ(doc["entries"][1]["value"], nullptr);
    EXPECT_EQ(doc["entries"][1]["value_text"], "inf");
    EXPECT_EQ(doc["inputs"].begin().key(), "alpha");
    EXPECT_TRUE(doc["pass"].get<bool>());
}

TEST(Json, SchemaRejectsMalformedReports) {
    nlohmann::json doc = nlohmann::json::parse(report::to_json(Report{}));
    doc["criterion"] = 0;
    EXPECT_FALSE(report::validate_schema(report::report_schema(), doc).empty());
    doc["criterion"] = nullptr;
    doc["extra"] = 1;
    EXPECT_FALSE(report::validate_schema(report::report_schema(), doc).empty());
    doc.erase("extra");
    doc["entries"] = nlohmann::json::array({{{"name", "x"}}});
    EXPECT_FALSE(report::validate_schema(report::report_schema(), doc).empty());
}

TEST(Json, EmbeddedSchemaMatchesDocs) {
    std::ifstream in(std::filesystem::path(LSDEV_SOURCE_DIR) / "docs" / "report.schema.json");
    ASSERT_TRUE(in);
    EXPECT_EQ(nlohmann::json::parse(in), report::report_schema());
}

TEST(Json, RenderingIsDeterministic) {
    Report r;
    r.experiment = "x";
    r.inputs = {{"b", "2"}, {"a", "1"}};
    r.add(make(0.30000000000000004, Rule::AtMost, 1.0));
    EXPECT_EQ(report::to_json(r), report::to_json(r));
    EXPECT_NE(report::to_json(r).find("0.30000000000000004"), std::string::npos);
}

TEST(Merge, PrefixesNames) {
    Report a, b;
    b.info("v", 1.0);
    a.merge(b, "part");
    EXPECT_EQ(a.entries.front().name, "part.v");
}

TEST(Write, ErrorNamesPath) {
    try {
        report::write(Report{}, report::Format::Csv, "/nonexistent-dir/r.csv");
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/r.csv"), std::string::npos);
    }
}

TEST(Params, TypedReadsAndEcho) {
    experiments::Params p;
    p.set_assignment("replicas = 1e4");
    p.set("sizes", "64, 128");
    EXPECT_EQ(p.count("replicas"), 10000u);
    EXPECT_EQ(p.integers("sizes"), (std::vector<std::int64_t>{64, 128}));
    EXPECT_DOUBLE_EQ(p.real("x", 0.5), 0.5);
    const auto echo = p.echo();
    ASSERT_EQ(echo.size(), 3u);
    EXPECT_EQ(echo[0], (std::pair<std::string, std::string>{"replicas", "10000"}));
    EXPECT_EQ(echo[2], (std::pair<std::string, std::string>{"x", "0.5"}));
}

TEST(Params, ErrorsNameTheField) {
    experiments::Params p;
    p.set("a", "abc");
    p.set("b", "");
    p.set("c", "1.5");
    auto field_of = [&](auto&& f) {
        try {
            f();
        } catch (const experiments::ConfigError& e) {
            return e.field();
        }
        return std::string("(none)");
    };
    EXPECT_EQ(field_of([&] { p.real("a"); }), "a");
    EXPECT_EQ(field_of([&] { p.real("b"); }), "b");
    EXPECT_EQ(field_of([&] { p.integer("c"); }), "c");
    EXPECT_EQ(field_of([&] { p.real("missing"); }), "missing");
    EXPECT_EQ(field_of([&] { p.reject_unused(); }), "a");
}

TEST(Params, ConfigFile) {
    const auto path = std::filesystem::temp_directory_path() / "lsdev_params_test.cfg";
    {
        std::ofstream out(path);
        out << "# comment\nseed = 5  # trailing\n\neta=0.3\n";
    }
    experiments::Params p;
    p.load_file(path);
    EXPECT_EQ(p.count("seed"), 5u);
    EXPECT_DOUBLE_EQ(p.real("eta"), 0.3);
    {
        std::ofstream out(path);
        out << "seed 5\n";
    }
    EXPECT_THROW(p.load_file(path), experiments::ConfigError);
    std::filesystem::remove(path);
}

TEST(Experiments, MissingEtaIsAConfigErrorNamingIt) {
    experiments::Params p;
    p.set("seed", "1");
    try {
        experiments::run_subcommand("daviaud", p, {});
        FAIL();
    } catch (const experiments::ConfigError& e) {
        EXPECT_EQ(e.field(), "eta");
    }
}

TEST(Experiments, MissingSeedAndUnknownKeysAreRejected) {
    experiments::Params p;
    try {
        experiments::run_subcommand("nbbm", p, {});
        FAIL();
    } catch (const experiments::ConfigError& e) {
        EXPECT_EQ(e.field(), "seed");
    }
    experiments::Params q;
    q.set("zeta", "0.5");
    try {
        experiments::run_subcommand("cover-check", q, {});
        FAIL();
    } catch (const experiments::ConfigError& e) {
        EXPECT_EQ(e.field(), "zeta");
    }
}

TEST(Experiments, EveryPartIsReachableFromASubcommand) {
    for (const auto& part : experiments::parts()) {
        bool found = false;
        for (const auto& sub : experiments::subcommands()) {
            found = found || std::find(sub.parts.begin(), sub.parts.end(), part.name) != sub.parts.end();
        }
        EXPECT_TRUE(found) << part.name;
    }
}

TEST(Experiments, SmallRunsAreThreadIndependent) {
    auto run = [](std::size_t threads) {
        experiments::Params p;
        p.set("seed", "3");
        p.set("seeds", "20");
        p.set("t", "3");
        return report::to_json(experiments::run_subcommand("nbbm", p, {threads}));
    };
    EXPECT_EQ(run(1), run(3));
}

TEST(Experiments, ReportsEchoEffectiveInputs) {
    experiments::Params p;
    p.set("seed", "3");
    p.set("seeds", "5");
    p.set("t", "2");
    const Report r = experiments::run_subcommand("nbbm", p, {1});
    EXPECT_EQ(r.experiment, "nbbm");
    ASSERT_TRUE(r.criterion);
    EXPECT_EQ(*r.criterion, 6);
    const std::vector<std::pair<std::string, std::string>> expected{
        {"caps", "10,100"}, {"seed", "3"}, {"seeds", "5"}, {"t", "2"}};
    EXPECT_EQ(r.inputs, expected);
    EXPECT_TRUE(r.pass());
}

#include "lsdev/report/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace lsdev::report {

std::string to_string(Rule rule) {
    switch (rule) {
        case Rule::None: return "none";
        case Rule::AbsWithin: return "abs";
        case Rule::RelWithin: return "rel";
        case Rule::SeWithin: return "se";
        case Rule::AtMost: return "at_most";
        case Rule::AtLeast: return "at_least";
        case Rule::Holds: return "holds";
    }
    return "none";
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Entry judge(Entry e) {
    if (e.rule == Rule::None) {
        e.pass.reset();
        return e;
    }
    const bool have_value = e.value && !std::isnan(*e.value);
    auto need = [&](const std::optional<double>& x) { return x && !std::isnan(*x); };
    bool ok = false;
    switch (e.rule) {
        case Rule::AbsWithin:
            ok = have_value && need(e.reference) && need(e.tolerance) &&
                 std::abs(*e.value - *e.reference) <= *e.tolerance;
            break;
        case Rule::RelWithin:
            ok = have_value && need(e.reference) && need(e.tolerance) &&
                 std::abs(*e.value - *e.reference) <= *e.tolerance * std::abs(*e.reference);
            break;
        case Rule::SeWithin:
            ok = have_value && need(e.reference) && need(e.tolerance) && need(e.std_error) &&
                 std::abs(*e.value - *e.reference) <= *e.tolerance * *e.std_error;
            break;
        case Rule::AtMost: ok = have_value && need(e.reference) && *e.value <= *e.reference; break;
        case Rule::AtLeast: ok = have_value && need(e.reference) && *e.value >= *e.reference; break;
        case Rule::Holds: ok = have_value && *e.value == 1.0; break;
        case Rule::None: break;
    }
    e.pass = ok;
    return e;
}

Entry& Report::add(Entry e) {
    entries.push_back(judge(std::move(e)));
    return entries.back();
}

void Report::info(std::string name, double value, std::string note) {
    Entry e;
    e.name = std::move(name);
    e.value = value;
    e.note = std::move(note);
    entries.push_back(std::move(e));
}

bool Report::pass() const { return failures() == 0; }

std::size_t Report::checks() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const Entry& e) { return e.pass.has_value(); }));
}

std::size_t Report::failures() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const Entry& e) { return e.pass.has_value() && !*e.pass; }));
}

void Report::merge(const Report& part, const std::string& prefix) {
    for (Entry e : part.entries) {
        e.name = prefix + "." + e.name;
        entries.push_back(std::move(e));
    }
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw std::invalid_argument("format must be csv or json, got '" + s + "'");
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

nlohmann::ordered_json json_number(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

}  // namespace

std::string to_csv(const Report& r) {
    std::string out = "name,value,std_error,reference,tolerance,rule,anchor,pass,note\n";
    for (const Entry& e : r.entries) {
        out += csv_field(e.name) + ',' + csv_number(e.value) + ',' + csv_number(e.std_error) + ',' +
               csv_number(e.reference) + ',' + csv_number(e.tolerance) + ',' + to_string(e.rule) + ',' +
               csv_field(e.anchor) + ',' + (e.pass ? (*e.pass ? "pass" : "fail") : "") + ',' + csv_field(e.note) +
               '\n';
    }
    return out;
}

std::string to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["criterion"] = r.criterion ? nlohmann::ordered_json(*r.criterion) : nlohmann::ordered_json(nullptr);
    j["pass"] = r.pass();
    auto inputs = nlohmann::ordered_json::object();
    auto sorted = r.inputs;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [k, v] : sorted) inputs[k] = v;
    j["inputs"] = std::move(inputs);
    auto entries = nlohmann::ordered_json::array();
    for (const Entry& e : r.entries) {
        nlohmann::ordered_json x;
        x["name"] = e.name;
        x["value"] = json_number(e.value);
        if (e.value && !std::isfinite(*e.value)) x["value_text"] = format_number(*e.value);
        x["std_error"] = json_number(e.std_error);
        x["reference"] = json_number(e.reference);
        x["tolerance"] = json_number(e.tolerance);
        x["rule"] = to_string(e.rule);
        x["anchor"] = e.anchor;
        x["pass"] = e.pass ? nlohmann::ordered_json(*e.pass) : nlohmann::ordered_json(nullptr);
        x["note"] = e.note;
        entries.push_back(std::move(x));
    }
    j["entries"] = std::move(entries);
    return j.dump(2) + "\n";
}

std::string render(const Report& r, Format f) { return f == Format::Csv ? to_csv(r) : to_json(r); }

void write(const Report& r, Format f, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const std::string text = render(r, f);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace lsdev::report

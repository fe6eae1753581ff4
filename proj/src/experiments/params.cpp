#include "lsdev/experiments/params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lsdev/report/report.hpp"

namespace lsdev::experiments {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double parse_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError(key, "expected a finite number, got '" + text + "'");
    }
    return v;
}

std::int64_t parse_integer(const std::string& key, const std::string& text) {
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        // accept integral reals such as 1e4
        const double d = parse_real(key, text);
        if (std::trunc(d) != d || std::abs(d) > 9.0e18) throw ConfigError(key, "expected an integer, got '" + text + "'");
        return static_cast<std::int64_t>(d);
    }
    return v;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
    return out;
}

}  // namespace

void Params::set(const std::string& key, const std::string& value) {
    const std::string k = trim(key);
    if (k.empty()) throw ConfigError("(empty)", "assignment without a key");
    values_[k] = trim(value);
}

void Params::set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(trim(assignment), "expected key=value");
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void Params::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        if (line.find('=') == std::string::npos) {
            throw ConfigError(trim(line), path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        set_assignment(line);
    }
}

std::optional<std::string> Params::raw(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (it->second.empty()) throw ConfigError(key, "value is empty");
    return it->second;
}

void Params::record(const std::string& key, const std::string& shown) { used_[key] = shown; }

double Params::real(const std::string& key, std::optional<double> fallback) {
    const auto r = raw(key);
    if (!r && !fallback) throw ConfigError(key, "required parameter is missing");
    const double v = r ? parse_real(key, *r) : *fallback;
    record(key, report::format_number(v));
    return v;
}

std::int64_t Params::integer(const std::string& key, std::optional<std::int64_t> fallback) {
    const auto r = raw(key);
    if (!r && !fallback) throw ConfigError(key, "required parameter is missing");
    const std::int64_t v = r ? parse_integer(key, *r) : *fallback;
    record(key, std::to_string(v));
    return v;
}

std::uint64_t Params::count(const std::string& key, std::optional<std::uint64_t> fallback) {
    const auto r = raw(key);
    if (!r && !fallback) throw ConfigError(key, "required parameter is missing");
    std::uint64_t v = 0;
    if (r) {
        const auto res = std::from_chars(r->data(), r->data() + r->size(), v);
        if (res.ec != std::errc() || res.ptr != r->data() + r->size()) {
            const std::int64_t i = parse_integer(key, *r);
            if (i < 0) throw ConfigError(key, "expected a nonnegative integer, got '" + *r + "'");
            v = static_cast<std::uint64_t>(i);
        }
    } else {
        v = *fallback;
    }
    record(key, std::to_string(v));
    return v;
}

std::vector<double> Params::reals(const std::string& key, std::optional<std::vector<double>> fallback) {
    const auto r = raw(key);
    if (!r && !fallback) throw ConfigError(key, "required parameter is missing");
    std::vector<double> v;
    if (r) {
        for (const std::string& item : split(*r)) v.push_back(parse_real(key, item));
    } else {
        v = *fallback;
    }
    record(key, join(v, [](double d) { return report::format_number(d); }));
    return v;
}

std::vector<std::int64_t> Params::integers(const std::string& key,
                                           std::optional<std::vector<std::int64_t>> fallback) {
    const auto r = raw(key);
    if (!r && !fallback) throw ConfigError(key, "required parameter is missing");
    std::vector<std::int64_t> v;
    if (r) {
        for (const std::string& item : split(*r)) v.push_back(parse_integer(key, item));
    } else {
        v = *fallback;
    }
    record(key, join(v, [](std::int64_t i) { return std::to_string(i); }));
    return v;
}

void Params::reject_unused() const {
    for (const auto& [k, v] : values_) {
        if (used_.count(k) == 0) throw ConfigError(k, "unknown parameter for this subcommand");
    }
}

std::vector<std::string> Params::keys() const {
    std::vector<std::string> out;
    for (const auto& kv : values_) out.push_back(kv.first);
    return out;
}

Params Params::unread() const {
    Params p;
    p.values_ = values_;
    return p;
}

std::vector<std::pair<std::string, std::string>> Params::echo() const { return {used_.begin(), used_.end()}; }

}  // namespace lsdev::experiments

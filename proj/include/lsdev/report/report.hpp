#pragma once

/**
 * Experiment reports and their CSV / JSON renderings.
 *
 * Rendering is byte-deterministic: numbers use the shortest round-trip form,
 * inputs are sorted by key, and nothing time-dependent is written.
 */

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lsdev::report {

/// How an entry is judged against its reference.
enum class Rule {
    None,        ///< informational
    AbsWithin,   ///< |value - reference| <= tolerance
    RelWithin,   ///< |value - reference| <= tolerance |reference|
    SeWithin,    ///< |value - reference| <= tolerance * std_error
    AtMost,      ///< value <= reference
    AtLeast,     ///< value >= reference
    Holds,       ///< value == 1 (a boolean property)
};

std::string to_string(Rule rule);

struct Entry {
    std::string name;
    std::optional<double> value;
    std::optional<double> std_error;
    std::optional<double> reference;
    std::optional<double> tolerance;
    Rule rule = Rule::None;
    std::string anchor;  ///< analytic anchor of the reference
    std::string note;
    std::optional<bool> pass;  ///< set by judge() for every rule except None
};

/// Fills `pass` from the rule. Missing numbers fail the check.
Entry judge(Entry e);

struct Report {
    std::string experiment;
    std::optional<int> criterion;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<Entry> entries;

    /// Appends and judges.
    Entry& add(Entry e);
    void info(std::string name, double value, std::string note = {});
    /// true iff no judged entry failed
    bool pass() const;
    std::size_t checks() const;
    std::size_t failures() const;
    /// Appends the entries of `part`, prefixing names with "<prefix>.".
    void merge(const Report& part, const std::string& prefix);
};

enum class Format { Csv, Json };

Format parse_format(const std::string& s);

/// Header row plus one row per entry.
std::string to_csv(const Report& r);
std::string to_json(const Report& r);
std::string render(const Report& r, Format f);

/// Throws std::runtime_error naming the path on I/O failure.
void write(const Report& r, Format f, const std::filesystem::path& path);

/// Shortest decimal that round-trips; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

}  // namespace lsdev::report

#pragma once

/**
 * Flat key=value experiment parameters.
 *
 * Config files hold one `key = value` per line; '#' starts a comment. Later
 * assignments override earlier ones, so command-line flags applied after the
 * file win. Every key read by an experiment is echoed (defaults included) into
 * its report; keys nobody reads are rejected.
 */

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lsdev::experiments {

/// Invalid or missing configuration; `field()` names the key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class Params {
public:
    void set(const std::string& key, const std::string& value);
    void load_file(const std::filesystem::path& path);
    /// Parses "key=value".
    void set_assignment(const std::string& assignment);
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double real(const std::string& key, std::optional<double> fallback = std::nullopt);
    std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt);
    std::uint64_t count(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt);
    std::vector<double> reals(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt);
    std::vector<std::int64_t> integers(const std::string& key,
                                       std::optional<std::vector<std::int64_t>> fallback = std::nullopt);

    /// Throws ConfigError for every key that was set but never read.
    void reject_unused() const;

    /// Keys that were set, whether read or not.
    std::vector<std::string> keys() const;
    /// Same assignments, nothing marked as read.
    Params unread() const;

    /// Effective values of every key read so far, sorted.
    std::vector<std::pair<std::string, std::string>> echo() const;

private:
    std::optional<std::string> raw(const std::string& key);
    void record(const std::string& key, const std::string& shown);

    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> used_;
};

}  // namespace lsdev::experiments

#pragma once

/**
 * Validator for the subset of JSON Schema used by docs/report.schema.json:
 * type (string or array of strings), required, properties,
 * additionalProperties (boolean), items, enum, minimum.
 */

#include <string>
#include <vector>

#include <json.hpp>

namespace lsdev::report {

/// Problems found, each prefixed with a JSON pointer; empty when valid.
std::vector<std::string> validate_schema(const nlohmann::json& schema, const nlohmann::json& doc);

/// The report schema shipped with the library (identical to docs/report.schema.json).
const nlohmann::json& report_schema();

}  // namespace lsdev::report

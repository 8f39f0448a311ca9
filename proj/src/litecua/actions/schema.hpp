#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace litecua::actions {

// Validator for the JSON-schema subset the tool schemas use: type, properties,
// required, additionalProperties, enum, minimum/maximum, minLength/maxLength,
// minItems/maxItems, items, pattern, oneOf. Returns the first violation with a
// field path, or nullopt when the instance validates.
std::optional<std::string> schema_violation(const nlohmann::json& schema,
                                            const nlohmann::json& value,
                                            const std::string& path = "$");

}  // namespace litecua::actions

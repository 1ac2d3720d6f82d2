#pragma once

#include <string>

#include <json.hpp>

#include "traitlab/experiment.hpp"

namespace traitlab {

/// Parses the TOML subset the config files use into an ordered JSON tree:
/// [table] and [dotted.table] headers, key = value pairs with string, integer,
/// float, boolean, and single-line scalar-array values, comments, and blank
/// lines. Multi-line strings, inline tables, and [[array-of-tables]] are
/// rejected with a line-numbered ConfigError, as are duplicate keys/tables.
nlohmann::ordered_json parse_toml(const std::string& content);

nlohmann::ordered_json parse_toml_file(const std::string& path);

}  // namespace traitlab

#pragma once

#include <json.hpp>
#include <string>

namespace otlab {

// Reader for the TOML subset the experiment configs use: [table] and
// [dotted.table] headers, bare or dotted keys, strings, booleans, integers,
// floats, homogeneous (possibly multi-line) arrays, inline tables and #
// comments. Lowers everything to JSON so both config formats share one
// schema. Throws ConfigError with a line number on malformed input.
nlohmann::json toml_to_json(const std::string& text);

}  // namespace otlab

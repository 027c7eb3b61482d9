#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "nsdamp/integrator.hpp"

namespace nsdamp {

/// Raw `section.key -> value text` pairs, in the order-independent form used
/// for validation and for sweep overrides.
using ConfigEntries = std::map<std::string, std::string>;

/// Syntax pass over the flat key/value format:
///
///     # comment
///     dim = 3
///     n = 32
///     t_max = 1.0
///     [damping]
///     kind = log
///     alpha = 0.25
///
/// Keys before the first section are top-level. Strings may be quoted.
/// Throws ConfigError("line N", ...) on malformed lines and duplicate keys.
ConfigEntries parse_config_text(const std::string& text);

/// Semantic pass: resolves defaults, rejects unknown keys, validates ranges.
/// Errors are ConfigError with the dotted key path.
SimConfig build_config(const ConfigEntries& entries);

SimConfig parse_config(const std::string& text);
SimConfig load_config_file(const std::string& path);

/// Every resolved setting, plus a_alpha and the damping formula actually evaluated.
nlohmann::json config_echo(const SimConfig& config);

/// Serialize back into the text format; build_config(parse_config_text(config_to_text(c))) == c.
std::string config_to_text(const SimConfig& config);

}  // namespace nsdamp

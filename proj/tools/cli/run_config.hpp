#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sqglab.h"

namespace sqgcli {

using Json = nlohmann::ordered_json;

/// Bad input from the user: malformed config, unknown or duplicate keys, unusable flag values.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    Json params = Json::object();
    std::string out;  ///< empty writes to stdout
};

/// 0 success, 2 validation/domain/usage, 3 non-convergence, 1 anything else.
int exit_code(sqg_status status);

/// Parameter schema of a command, as published by the library.  Throws UsageError.
Json command_schema(const std::string& command);
/// Type name ("number", "integer", "string", "numbers") of key, or "" if the command lacks it.
std::string param_type(const Json& schema, const std::string& key);

/// TOML-subset value: number, "string" or [number, ...].  Throws UsageError.
Json parse_value(std::string_view text);
/// Flag value of the given type; strings may be bare and lists may be comma separated.
Json parse_flag_value(std::string_view text, const std::string& type);

/// Parses `key = value` lines with '#' comments.  Errors mention the line number; keys are
/// checked against the schema of `command`.
Json parse_config(std::string_view text, const std::string& command, const std::string& origin = "config");
RunConfig load_config(const std::string& path, const std::string& command);

/// Runs through the C API.  Returns the status and fills either report or error.
sqg_status run(const RunConfig& cfg, Json& report, std::string& error);

}  // namespace sqgcli

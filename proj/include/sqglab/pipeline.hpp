#pragma once

#include <string>
#include <vector>

#include "sqglab/report.hpp"

namespace sqg {

enum class ParamType { number, integer, string, numbers };

const char* to_string(ParamType type);

struct ParamSpec {
    std::string key;
    ParamType type = ParamType::number;
    bool required = false;
    Json default_value;  ///< null means "derived" when not required
    std::string help;
};

/// Subcommands handled by run_command: simulate, pair, polygon, array, plasma, nondegeneracy,
/// ansatz-error, reduced-root.
const std::vector<std::string>& command_names();

/// Throws ConfigError for an unknown command.
const std::vector<ParamSpec>& command_schema(const std::string& command);

/// Fills defaults, rejects unknown keys, missing required keys and type mismatches (ConfigError).
/// A single number is accepted where a list is expected.
Json resolve_params(const std::string& command, const Json& given);

/// {"command", "params" (resolved), "result"}.  Module errors propagate as exceptions.
Json run_command(const std::string& command, const Json& given);

}  // namespace sqg

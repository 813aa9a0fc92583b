#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "run_config.hpp"
#include "sweep.hpp"

namespace {

using sqgcli::Json;

int emit(const Json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream f(path);
    if (!f || !(f << text)) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return 2;
    }
    return 0;
}

struct Command {
    CLI::App* app = nullptr;
    Json schema;
    std::map<std::string, std::optional<std::string>> flags;
    std::string config;
    std::string out;
};

struct Sweep {
    CLI::App* app = nullptr;
    std::string task, param, values, config, out;
    std::vector<std::string> sets;
    int jobs = 0;
};

Json override_params(Json params, const Json& schema,
                     const std::map<std::string, std::optional<std::string>>& flags) {
    for (const auto& [key, value] : flags)
        if (value) params[key] = sqgcli::parse_flag_value(*value, sqgcli::param_type(schema, key));
    return params;
}

int run_single(const std::string& name, const Command& c) {
    sqgcli::RunConfig cfg;
    cfg.command = name;
    if (!c.config.empty()) cfg = sqgcli::load_config(c.config, name);
    cfg.params = override_params(cfg.params, c.schema, c.flags);
    Json report;
    std::string error;
    const sqg_status st = sqgcli::run(cfg, report, error);
    if (st != SQG_OK) {
        std::cerr << "error (" << sqg_status_name(st) << "): " << error << "\n";
        return sqgcli::exit_code(st);
    }
    return emit(report, c.out);
}

std::vector<std::string> split_top_level(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    bool in_string = false;
    for (char ch : text) {
        if (ch == '"') in_string = !in_string;
        if (ch == ',' && !in_string) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

int run_sweep(const Sweep& sw) {
    const Json schema = sqgcli::command_schema(sw.task);
    const std::string type = sqgcli::param_type(schema, sw.param);
    if (type.empty()) throw sqgcli::UsageError("task '" + sw.task + "' has no parameter '" + sw.param + "'");
    sqgcli::SweepSpec spec;
    spec.task = sw.task;
    spec.param = sw.param;
    if (!sw.config.empty()) spec.base = sqgcli::load_config(sw.config, sw.task).params;
    for (const auto& kv : sw.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw sqgcli::UsageError("--set expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string t = sqgcli::param_type(schema, key);
        if (t.empty()) throw sqgcli::UsageError("unknown key '" + key + "' for command '" + sw.task + "'");
        spec.base[key] = sqgcli::parse_flag_value(kv.substr(eq + 1), t);
    }
    std::string values = sw.values;
    if (!values.empty() && values.front() == '[' && values.back() == ']') values = values.substr(1, values.size() - 2);
    for (const auto& v : split_top_level(values)) {
        if (type == "numbers") throw sqgcli::UsageError("cannot sweep over list parameter '" + sw.param + "'");
        spec.values.push_back(sqgcli::parse_flag_value(v, type));
    }
    spec.jobs = sqgcli::resolve_jobs(sw.jobs);
    int exit = 0;
    const Json out = sqgcli::run_sweep(spec, exit);
    const int w = emit(out, sw.out);
    return w != 0 ? w : exit;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point vortices and vortex patches for generalized surface quasi-geostrophic flows"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sqg_version());

    std::map<std::string, Command> commands;
    sqg_string* names = nullptr;
    if (sqg_commands(&names) != SQG_OK) {
        std::cerr << "error: " << sqg_last_error() << "\n";
        return 1;
    }
    const Json name_list = Json::parse(sqg_string_data(names));
    sqg_string_free(names);

    for (const auto& jn : name_list) {
        const std::string name = jn;
        Command& c = commands[name];
        c.schema = sqgcli::command_schema(name);
        c.app = app.add_subcommand(name, "run the " + name + " pipeline");
        c.app->add_option("--config", c.config, "TOML-subset parameter file");
        c.app->add_option("--out", c.out, "JSON report path (default stdout)");
        for (const auto& spec : c.schema) {
            const std::string key = spec["key"];
            std::string help = spec["help"].get<std::string>() + " [" + spec["type"].get<std::string>() + "]";
            if (spec["required"].get<bool>()) help += " (required)";
            else if (!spec["default"].is_null()) help += " (default " + spec["default"].dump() + ")";
            c.app->add_option_function<std::string>(
                "--" + key, [&c, key](const std::string& v) { c.flags[key] = v; }, help);
            c.flags[key] = std::nullopt;
        }
    }

    Sweep sw;
    sw.app = app.add_subcommand("sweep", "run one task over a list of parameter values");
    sw.app->add_option("--task", sw.task, "subcommand to run")->required();
    sw.app->add_option("--param", sw.param, "parameter to vary")->required();
    sw.app->add_option("--values", sw.values, "comma separated values")->required();
    sw.app->add_option("--set", sw.sets, "fixed parameter key=value (repeatable)");
    sw.app->add_option("--config", sw.config, "TOML-subset file with fixed parameters");
    sw.app->add_option("--jobs", sw.jobs, "worker count (default SQGLAB_JOBS or all cores)");
    sw.app->add_option("--out", sw.out, "JSON report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sw.app->parsed()) return run_sweep(sw);
        for (auto& [name, c] : commands)
            if (c.app->parsed()) return run_single(name, c);
    } catch (const sqgcli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

#include "run_config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace sqgcli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_number(std::string_view text, double& out) {
    const std::string buf(trim(text));
    if (buf.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(buf.c_str(), &end);
    return end == buf.c_str() + buf.size() && errno != ERANGE;
}

Json number_json(double x) {
    if (x == static_cast<double>(static_cast<long long>(x)) && std::abs(x) < 1e15)
        return static_cast<long long>(x);
    return x;
}

std::string parse_string(std::string_view t) {
    std::string out;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        char c = t[i];
        if (c == '"') throw UsageError("unescaped quote inside string");
        if (c == '\\') {
            if (i + 2 >= t.size()) throw UsageError("dangling escape in string");
            const char e = t[++i];
            switch (e) {
                case 'n': c = '\n'; break;
                case 't': c = '\t'; break;
                case '"': c = '"'; break;
                case '\\': c = '\\'; break;
                default: throw UsageError(std::string("unsupported escape \\") + e);
            }
        }
        out += c;
    }
    return out;
}

Json parse_list(std::string_view body) {
    Json arr = Json::array();
    body = trim(body);
    if (body.empty()) return arr;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = body.find(',', start);
        const auto item = trim(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start));
        if (item.empty()) {
            if (comma == std::string_view::npos) break;  // trailing comma
            throw UsageError("empty array element");
        }
        double x;
        if (!parse_number(item, x)) throw UsageError("array elements must be numbers: '" + std::string(item) + "'");
        arr.push_back(number_json(x));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return arr;
}

std::string strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '\\' && in_string) {
            ++i;
        } else if (line[i] == '"') {
            in_string = !in_string;
        } else if (line[i] == '#' && !in_string) {
            return std::string(line.substr(0, i));
        }
    }
    return std::string(line);
}

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

}  // namespace

int exit_code(sqg_status status) {
    switch (status) {
        case SQG_OK: return 0;
        case SQG_E_DOMAIN:
        case SQG_E_SINGULAR:
        case SQG_E_CONFIG:
        case SQG_E_ARGUMENT: return 2;
        case SQG_E_CONVERGENCE: return 3;
        default: return 1;
    }
}

Json command_schema(const std::string& command) {
    sqg_string* out = nullptr;
    if (sqg_command_schema(command.c_str(), &out) != SQG_OK) throw UsageError(sqg_last_error());
    Json schema = Json::parse(sqg_string_data(out));
    sqg_string_free(out);
    return schema;
}

std::string param_type(const Json& schema, const std::string& key) {
    for (const auto& spec : schema)
        if (spec["key"] == key) return spec["type"];
    return {};
}

Json parse_value(std::string_view text) {
    const auto t = trim(text);
    if (t.empty()) throw UsageError("missing value");
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"') throw UsageError("unterminated string");
        return parse_string(t);
    }
    if (t.front() == '[') {
        if (t.back() != ']') throw UsageError("unterminated array");
        return parse_list(t.substr(1, t.size() - 2));
    }
    double x;
    if (!parse_number(t, x)) throw UsageError("cannot parse value '" + std::string(t) + "'");
    return number_json(x);
}

Json parse_flag_value(std::string_view text, const std::string& type) {
    const auto t = trim(text);
    if (type == "string") {
        if (!t.empty() && t.front() == '"') return parse_value(t);
        return std::string(t);
    }
    if (type == "numbers" && !t.empty() && t.front() != '[') return parse_list(t);
    return parse_value(t);
}

Json parse_config(std::string_view text, const std::string& command, const std::string& origin) {
    const Json schema = command_schema(command);
    Json params = Json::object();
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_comment(raw);
        const auto body = trim(line);
        if (body.empty()) continue;
        auto where = [&](const std::string& msg) {
            return UsageError(origin + ":" + std::to_string(lineno) + ": " + msg);
        };
        const std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) throw where("expected 'key = value'");
        const std::string key(trim(body.substr(0, eq)));
        if (!valid_key(key)) throw where("invalid key '" + key + "'");
        if (!seen.insert(key).second) throw where("duplicate key '" + key + "'");
        const std::string type = param_type(schema, key);
        if (type.empty()) throw where("unknown key '" + key + "' for command '" + command + "'");
        try {
            params[key] = parse_value(body.substr(eq + 1));
        } catch (const UsageError& e) {
            throw where(e.what());
        }
    }
    return params;
}

RunConfig load_config(const std::string& path, const std::string& command) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    RunConfig cfg;
    cfg.command = command;
    cfg.params = parse_config(buf.str(), command, path);
    return cfg;
}

sqg_status run(const RunConfig& cfg, Json& report, std::string& error) {
    sqg_string* out = nullptr;
    const std::string params = cfg.params.dump();
    const sqg_status st = sqg_run(cfg.command.c_str(), params.c_str(), &out);
    if (st != SQG_OK) {
        error = sqg_last_error();
        return st;
    }
    report = Json::parse(sqg_string_data(out));
    sqg_string_free(out);
    return st;
}

}  // namespace sqgcli

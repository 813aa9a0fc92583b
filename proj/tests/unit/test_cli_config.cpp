#include <doctest.h>

#include <cstdlib>
#include <stdexcept>

#include "run_config.hpp"
#include "sweep.hpp"

using namespace sqgcli;

namespace {
std::string error_of(const std::string& text, const std::string& command = "pair") {
    try {
        parse_config(text, command, "run.toml");
    } catch (const UsageError& e) {
        return e.what();
    }
    return {};
}
}  // namespace

TEST_CASE("scalar, string and list values") {
    CHECK(parse_value("0.5") == 0.5);
    CHECK(parse_value(" 12 ") == 12);
    CHECK(parse_value("-1e-3") == -1e-3);
    CHECK(parse_value("\"a # b\"") == "a # b");
    CHECK(parse_value("\"q\\\"x\"") == "q\"x");
    CHECK(parse_value("[1, 2.5, 3e-1]") == Json::array({1, 2.5, 0.3}));
    CHECK(parse_value("[]") == Json::array());
    CHECK_THROWS_AS(parse_value("abc"), UsageError);
    CHECK_THROWS_AS(parse_value("[1, x]"), UsageError);
    CHECK_THROWS_AS(parse_value("\"open"), UsageError);
    CHECK_THROWS_AS(parse_value(""), UsageError);
}

TEST_CASE("flag values") {
    CHECK(parse_flag_value("pair", "string") == "pair");
    CHECK(parse_flag_value("1e-2,5e-3", "numbers") == Json::array({1e-2, 5e-3}));
    CHECK(parse_flag_value("[1,2]", "numbers") == Json::array({1, 2}));
    CHECK(parse_flag_value("3", "integer") == 3);
    CHECK_THROWS_AS(parse_flag_value("three", "integer"), UsageError);
}

TEST_CASE("config files") {
    const Json p = parse_config("# pair run\ns = 0.5\n\nd = 1   # half-separation\nm = 2\n", "pair");
    CHECK(p["s"] == 0.5);
    CHECK(p["d"] == 1);
    CHECK(p["m"] == 2);
    const Json a = parse_config("s = 0.5\ncoords = [-1.0, 0.5, 0.3]\n", "array");
    CHECK(a["coords"].size() == 3);
    const Json sim = parse_config("s = 0.5\npreset = \"polygon\"\n", "simulate");
    CHECK(sim["preset"] == "polygon");
}

TEST_CASE("config errors name the line") {
    CHECK(error_of("s = 0.5\ns = 0.6\n") == "run.toml:2: duplicate key 's'");
    CHECK(error_of("s = 0.5\n\nfoo = 1\n") == "run.toml:3: unknown key 'foo' for command 'pair'");
    CHECK(error_of("s 0.5\n") == "run.toml:1: expected 'key = value'");
    CHECK(error_of("s = 0.5\nd = [1, \n") == "run.toml:2: unterminated array");
    CHECK(error_of("a b = 1\n") == "run.toml:1: invalid key 'a b'");
    CHECK_THROWS_AS(load_config("/nonexistent/run.toml", "pair"), UsageError);
    CHECK_THROWS_AS(parse_config("s = 1\n", "nope"), UsageError);
}

TEST_CASE("exit codes") {
    CHECK(exit_code(SQG_OK) == 0);
    CHECK(exit_code(SQG_E_DOMAIN) == 2);
    CHECK(exit_code(SQG_E_CONFIG) == 2);
    CHECK(exit_code(SQG_E_SINGULAR) == 2);
    CHECK(exit_code(SQG_E_CONVERGENCE) == 3);
    CHECK(exit_code(SQG_E_INTERNAL) == 1);
}

TEST_CASE("runs through the library") {
    RunConfig cfg{"polygon", Json{{"s", 0.5}, {"k", 3}, {"rho", 1}, {"m", 1}}, {}};
    Json report;
    std::string error;
    REQUIRE(run(cfg, report, error) == SQG_OK);
    CHECK(report["result"]["alpha"].get<double>() == doctest::Approx(0.091888148).epsilon(1e-8));
    cfg.params["s"] = 1.5;
    CHECK(run(cfg, report, error) == SQG_E_DOMAIN);
    CHECK_FALSE(error.empty());
}

TEST_CASE("sweep keeps input order and is independent of the pool size") {
    SweepSpec spec;
    spec.task = "pair";
    spec.param = "d";
    spec.values = {0.5, 1.0, -1.0, 2.0, 4.0};
    spec.base = Json{{"s", 0.5}, {"m", 1}};
    spec.jobs = 1;
    int e1 = 0, e3 = 0;
    const Json a = run_sweep(spec, e1);
    spec.jobs = 3;
    const Json b = run_sweep(spec, e3);
    CHECK(a.dump() == b.dump());
    CHECK(e1 == 2);
    REQUIRE(a["runs"].size() == 5);
    CHECK(a["runs"][1]["report"]["result"]["c"].get<double>() == doctest::Approx(-0.0397887).epsilon(1e-6));
    CHECK(a["runs"][2]["exit_code"] == 2);
    CHECK(a["runs"][2].contains("error"));
    CHECK(a["runs"][3]["value"] == 2.0);
}

TEST_CASE("pool size resolution") {
    CHECK(resolve_jobs(4) == 4);
    setenv("SQGLAB_JOBS", "3", 1);
    CHECK(resolve_jobs(0) == 3);
    setenv("SQGLAB_JOBS", "x", 1);
    CHECK_THROWS_AS(resolve_jobs(0), UsageError);
    unsetenv("SQGLAB_JOBS");
    CHECK(resolve_jobs(0) >= 1);
}

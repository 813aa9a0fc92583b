#include "sqglab/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <random>

#include "sqglab/error.hpp"

namespace sqg {

const char* to_string(ParamType t) {
    switch (t) {
        case ParamType::number: return "number";
        case ParamType::integer: return "integer";
        case ParamType::string: return "string";
        case ParamType::numbers: return "numbers";
    }
    return "?";
}

namespace {

ParamSpec req(std::string key, ParamType t, std::string help) {
    return {std::move(key), t, true, nullptr, std::move(help)};
}
ParamSpec opt(std::string key, ParamType t, Json def, std::string help) {
    return {std::move(key), t, false, std::move(def), std::move(help)};
}

using P = ParamType;

const std::map<std::string, std::vector<ParamSpec>>& schemas() {
    static const std::map<std::string, std::vector<ParamSpec>> table = {
        {"simulate",
         {req("s", P::number, "fractional order, 0 < s <= 1"),
          opt("preset", P::string, "pair", "pair, polygon or custom"),
          opt("d", P::number, 1.0, "pair half-separation"),
          opt("m", P::number, 1.0, "intensity for presets"),
          opt("k", P::integer, 3, "polygon vertex count"),
          opt("rho", P::number, 1.0, "polygon radius"),
          opt("positions", P::numbers, Json::array(), "custom: x1, y1, x2, y2, ..."),
          opt("intensities", P::numbers, Json::array(), "custom: m1, m2, ..."),
          opt("T", P::number, 10.0, "final time"),
          opt("tol", P::number, 1e-10, "integrator tolerance"),
          opt("trajectory_csv", P::string, "", "optional CSV output path")}},
        {"pair",
         {req("s", P::number, "fractional order"), req("d", P::number, "half-separation"),
          req("m", P::number, "intensity of the vortex at +d e1")}},
        {"polygon",
         {req("s", P::number, "fractional order"), req("k", P::integer, "vertex count"),
          req("rho", P::number, "radius"), req("m", P::number, "common intensity")}},
        {"array",
         {req("s", P::number, "fractional order"),
          opt("k", P::integer, 3, "positive vortices"),
          opt("pairs", P::integer, 1, "conjugate pairs among them"),
          opt("coords", P::numbers, Json::array({-1.026, 0.563, 0.368}), "free coordinates"),
          opt("c", P::number, nullptr, "speed guess (default: least-squares fit)"),
          opt("gauge_index", P::integer, nullptr, "pinned coordinate (default: last)"),
          opt("gauge_value", P::number, nullptr, "pinned value (default: its initial value)"),
          opt("perturb", P::number, 0.0, "uniform noise added to the free coordinates"),
          opt("seed", P::integer, 0, "random seed for the perturbation"),
          opt("s_target", P::number, nullptr, "continue the solution to this s"),
          opt("steps", P::integer, 10, "continuation steps")}},
        {"plasma",
         {req("s", P::number, "fractional order"), req("gamma", P::number, "nonlinearity exponent"),
          opt("N", P::integer, 400, "grid intervals"),
          opt("R_max", P::number, 40.0, "outer radius in units of R0"),
          opt("tail_at", P::numbers, Json::array({10.0, 20.0, 50.0}), "tail radii in units of R0"),
          opt("profile_csv", P::string, "", "optional CSV output path")}},
        {"nondegeneracy",
         {req("s", P::number, "fractional order"), req("gamma", P::number, "nonlinearity exponent"),
          opt("N", P::integer, 400, "grid intervals"),
          opt("max_mode", P::integer, 6, "highest angular mode"),
          opt("threshold", P::number, 0.05, "flag when min |lambda - 1| is below this"),
          opt("eigenvalues", P::integer, 8, "eigenvalues reported per mode")}},
        {"ansatz-error",
         {req("s", P::number, "fractional order"), req("gamma", P::number, "nonlinearity exponent"),
          req("eps", P::numbers, "concentration scales"),
          opt("d", P::number, 0.8, "pair half-separation"),
          opt("m", P::number, 1.0, "pair intensity"),
          opt("c", P::number, nullptr, "speed (default: pair speed at d_ref)"),
          opt("d_ref", P::number, 1.0, "separation defining the default speed"),
          opt("delta", P::number, nullptr, "cutoff radius (default: d/2)"),
          opt("N", P::integer, 400, "plasma grid intervals"),
          opt("field_csv", P::string, "", "optional CSV of the error field at the smallest eps")}},
        {"reduced-root",
         {req("s", P::number, "fractional order"), req("c", P::number, "speed"),
          req("m", P::number, "intensity"),
          opt("d", P::number, nullptr, "also evaluate the reduced function at d")}},
    };
    return table;
}

bool is_integral(const Json& v) {
    if (v.is_number_integer() || v.is_number_unsigned()) return true;
    if (!v.is_number_float()) return false;
    const double x = v.get<double>();
    return std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15;
}

Json check_type(const ParamSpec& spec, const Json& v) {
    auto bad = [&] {
        return ConfigError("parameter '" + spec.key + "' must be of type " + to_string(spec.type));
    };
    switch (spec.type) {
        case P::number:
            if (!v.is_number()) throw bad();
            return v.get<double>();
        case P::integer:
            if (!is_integral(v)) throw bad();
            return static_cast<long long>(v.get<double>());
        case P::string:
            if (!v.is_string()) throw bad();
            return v;
        case P::numbers: {
            if (v.is_number()) return Json::array({v.get<double>()});
            if (!v.is_array()) throw bad();
            Json out = Json::array();
            for (const auto& e : v) {
                if (!e.is_number()) throw bad();
                out.push_back(e.get<double>());
            }
            return out;
        }
    }
    throw bad();
}

double get(const Json& p, const char* key) { return p.at(key).get<double>(); }
long long geti(const Json& p, const char* key) { return p.at(key).get<long long>(); }
std::vector<double> getv(const Json& p, const char* key) { return p.at(key).get<std::vector<double>>(); }

std::size_t as_size(long long v, const char* what) {
    if (v < 0) throw DomainError(std::string(what) + " must be nonnegative");
    return std::size_t(v);
}

void write_file(const std::string& path, const auto& writer) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    writer(out);
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

Json run_simulate(const Json& p) {
    const double s = get(p, "s");
    const std::string preset = p["preset"];
    VortexConfig cfg;
    if (preset == "pair") {
        cfg = vortex_pair(get(p, "d"), get(p, "m"), s).config;
    } else if (preset == "polygon") {
        const long long k = geti(p, "k");
        if (k < 2 || k > 100000) throw DomainError("polygon: need k >= 2");
        cfg = rotating_polygon(int(k), get(p, "rho"), get(p, "m"), s).config;
    } else if (preset == "custom") {
        const auto xy = getv(p, "positions");
        const auto m = getv(p, "intensities");
        if (xy.size() != 2 * m.size() || m.empty())
            throw DomainError("custom: positions must hold 2 entries per intensity");
        for (std::size_t i = 0; i < m.size(); ++i) cfg.positions.push_back({xy[2 * i], xy[2 * i + 1]});
        cfg.intensities = m;
        cfg.s = s;
    } else {
        throw ConfigError("preset must be one of pair, polygon, custom");
    }
    IntegratorOptions opt;
    opt.tol = get(p, "tol");
    if (!(opt.tol > 0.0)) throw DomainError("tol must be positive");
    const Trajectory traj = integrate(cfg, get(p, "T"), opt);
    const std::string csv = p["trajectory_csv"];
    if (!csv.empty()) write_file(csv, [&](std::ostream& o) { write_trajectory_csv(o, traj); });
    Json r;
    r["positions"] = points(cfg.positions);
    r["intensities"] = nums(cfg.intensities);
    r["final_time"] = num(traj.times.back());
    r["steps"] = traj.size() - 1;
    r["rejected_steps"] = traj.rejected_steps;
    r["collided"] = traj.collided;
    r["motion"] = to_json(measure_motion(traj));
    r["invariant_drift"] = to_json(traj.invariant_drift);
    r["final_positions"] = points(traj.states.back());
    return r;
}

Json run_pair(const Json& p) {
    const double s = get(p, "s"), d = get(p, "d"), m = get(p, "m");
    EquilibriumSolution sol = vortex_pair(d, m, s);
    const std::vector<Eigen::VectorXd> gens{translation_generator(2, {1.0, 0.0}),
                                            translation_generator(2, {0.0, 1.0})};
    sol.certificate = nondegeneracy_spectrum(sol, gens);
    const SymmetricArrayParams sym{1, 0, {d}, sol.motion.value};
    Json r;
    r["c"] = num(sol.motion.value);
    r["solution"] = to_json(sol);
    r["full_hessian"] = to_json(*sol.certificate);
    r["symmetric_class"] = to_json(symmetric_array_certificate(sym, s));
    r["reduced_root"] = nullptr;
    if (s < 1.0) {
        const ReducedRoot rr = reduced_root(sol.motion.value, m, s);
        if (rr.has_root) r["reduced_root"] = num(rr.d_star);
    }
    return r;
}

Json run_polygon(const Json& p) {
    const long long k = geti(p, "k");
    if (k < 2 || k > 100000) throw DomainError("rotating_polygon: need k >= 2");
    EquilibriumSolution sol = rotating_polygon(int(k), get(p, "rho"), get(p, "m"), get(p, "s"));
    const std::vector<Eigen::VectorXd> gens{rotation_generator(sol.config)};
    sol.certificate = nondegeneracy_spectrum(sol, gens);
    Json r;
    r["alpha"] = num(sol.motion.value);
    r["solution"] = to_json(sol);
    r["hessian"] = to_json(*sol.certificate);
    return r;
}

Json run_array(Json& p) {
    const double s = get(p, "s");
    SymmetricArrayParams a;
    a.k = as_size(geti(p, "k"), "k");
    a.pairs = as_size(geti(p, "pairs"), "pairs");
    a.coords = getv(p, "coords");
    a.validate();
    const double perturb = get(p, "perturb");
    if (perturb < 0.0) throw DomainError("perturb must be nonnegative");
    if (perturb > 0.0) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(geti(p, "seed")));
        std::uniform_real_distribution<double> u(-perturb, perturb);
        for (double& x : a.coords) x += u(rng);
    }
    if (p["gauge_index"].is_null()) p["gauge_index"] = static_cast<long long>(a.k - 1);
    const std::size_t gi = as_size(geti(p, "gauge_index"), "gauge_index");
    if (gi >= a.coords.size()) throw DomainError("gauge_index out of range");
    if (p["gauge_value"].is_null()) p["gauge_value"] = num(getv(p, "coords")[gi]);
    const double gv = get(p, "gauge_value");
    if (p["c"].is_null()) {
        const auto [pp, qq] = a.reconstruct();
        a.c = fit_array_speed(pp, qq, s);
    } else {
        a.c = get(p, "c");
    }
    const ArraySolution sol = solve_symmetric_array(a, s, gi, gv);
    const auto [pp, qq] = sol.params.reconstruct();
    Json r;
    r["coords"] = nums(sol.params.coords);
    r["c"] = num(sol.params.c);
    r["p"] = points(pp);
    r["q"] = points(qq);
    r["residual_norm"] = num(sol.solution.residual_norm);
    r["iterations"] = sol.solution.iterations;
    r["certificate"] = to_json(*sol.solution.certificate);
    r["reduced_certificate"] = to_json(sol.reduced);
    if (!p["s_target"].is_null()) {
        const long long steps = geti(p, "steps");
        if (steps < 0) throw DomainError("steps must be nonnegative");
        const Branch br = continue_symmetric_array(sol.params, s, get(p, "s_target"), int(steps), gi, gv);
        Json pts = Json::array();
        for (const auto& bp : br.points) {
            const SymmetricArrayParams q = array_from_unknowns(sol.params, bp.x);
            pts.push_back({{"s", num(bp.s)},
                           {"coords", nums(q.coords)},
                           {"c", num(q.c)},
                           {"residual_norm", num(bp.residual_norm)},
                           {"kernel_dimension", bp.kernel_dimension}});
        }
        r["branch"] = {{"points", pts}, {"bifurcation", br.bifurcation}, {"failed", br.failed},
                       {"note", br.note}};
        if (br.failed)
            throw ConvergenceError("continuation failed: " + br.note,
                                   br.points.empty() ? 0.0 : br.points.back().residual_norm);
    }
    return r;
}

RadialProfile profile_from(const Json& p, const char* n_key = "N", double R_max = 40.0) {
    FracParams fp{2, get(p, "s"), get(p, "gamma")};
    GridSpec g;
    const long long N = geti(p, n_key);
    if (N < 8 || N > 20000) throw DomainError("N must be between 8 and 20000");
    g.N = int(N);
    g.R_max = R_max;
    return solve_ground_state(fp, g);
}

Json run_plasma(const Json& p) {
    const RadialProfile prof = profile_from(p, "N", get(p, "R_max"));
    const auto factors = getv(p, "tail_at");
    const PlasmaDiagnostics diag = diagnostics(prof, factors);
    const std::string csv = p["profile_csv"];
    if (!csv.empty()) write_file(csv, [&](std::ostream& o) { write_profile_csv(o, prof); });
    return to_json(diag, prof);
}

Json run_nondegeneracy(const Json& p) {
    const RadialProfile prof = profile_from(p);
    const long long mm = geti(p, "max_mode");
    if (mm < 1 || mm > 1000) throw DomainError("max_mode must be between 1 and 1000");
    const long long ne = geti(p, "eigenvalues");
    if (ne < 1) throw DomainError("eigenvalues must be positive");
    const auto reps = nondegeneracy_report(prof, int(mm), 0, get(p, "threshold"));
    Json modes = Json::array(), flagged = Json::array();
    for (const auto& rep : reps) {
        modes.push_back(to_json(rep, std::size_t(ne)));
        if (rep.flagged) flagged.push_back(rep.mode);
    }
    Json r;
    r["R0"] = num(prof.R0);
    r["modes"] = modes;
    r["flagged_modes"] = flagged;
    r["dilation_mode_residual"] = num(dilation_mode_residual(prof));
    return r;
}

Json run_ansatz_error(Json& p) {
    const double s = get(p, "s"), d = get(p, "d"), m = get(p, "m");
    if (!(d > 0.0)) throw DomainError("d must be positive");
    if (p["c"].is_null()) p["c"] = num(vortex_pair(get(p, "d_ref"), m, s).motion.value);
    if (p["delta"].is_null()) p["delta"] = num(0.5 * d);
    auto prof = std::make_shared<const RadialProfile>(profile_from(p));
    const double c = get(p, "c"), delta = get(p, "delta");
    const auto eps = getv(p, "eps");
    if (eps.empty()) throw DomainError("eps list is empty");
    const AnsatzParams tmpl = pair_ansatz(d, m, c, eps.front(), delta, prof);
    Json r;
    r["mu"] = num(tmpl.mu.front());
    if (eps.size() >= 4) {
        r["scaling"] = to_json(scaling_study(eps, tmpl));
    } else {
        r["scaling"] = nullptr;
    }
    Json per = Json::array();
    double smallest = eps.front();
    for (double e : eps) {
        const AnsatzParams a = make_ansatz(tmpl.config, e, c, delta, prof);
        const ErrorField f = error_field(a);
        per.push_back({{"eps", num(e)},
                       {"lambda", nums(a.lambda)},
                       {"sup_error", num(f.sup_error)},
                       {"linear_coeff", num(f.linear_coeff)}});
        smallest = std::min(smallest, e);
    }
    r["per_eps"] = per;
    r["reduced_function"] = num(reduced_function(d, c, m, s));
    const std::string csv = p["field_csv"];
    if (!csv.empty()) {
        const ErrorField f = error_field(make_ansatz(tmpl.config, smallest, c, delta, prof));
        write_file(csv, [&](std::ostream& o) { write_error_field_csv(o, f); });
    }
    return r;
}

Json run_reduced_root(const Json& p) {
    const double s = get(p, "s"), c = get(p, "c"), m = get(p, "m");
    const ReducedRoot rr = reduced_root(c, m, s);
    Json r;
    r["c1"] = num(rr.c1);
    r["has_root"] = rr.has_root;
    r["d_star"] = rr.has_root ? num(rr.d_star) : Json(nullptr);
    r["value_at_d"] = p["d"].is_null() ? Json(nullptr) : num(reduced_function(get(p, "d"), c, m, s));
    return r;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"simulate", "pair",          "polygon",
                                                "array",    "plasma",        "nondegeneracy",
                                                "ansatz-error", "reduced-root"};
    return names;
}

const std::vector<ParamSpec>& command_schema(const std::string& command) {
    const auto& t = schemas();
    auto it = t.find(command);
    if (it == t.end()) throw ConfigError("unknown command '" + command + "'");
    return it->second;
}

Json resolve_params(const std::string& command, const Json& given) {
    const auto& schema = command_schema(command);
    if (!given.is_null() && !given.is_object()) throw ConfigError("parameters must form an object");
    if (given.is_object())
        for (const auto& [key, value] : given.items()) {
            bool known = false;
            for (const auto& spec : schema) known = known || spec.key == key;
            if (!known) throw ConfigError("unknown key '" + key + "' for command '" + command + "'");
        }
    Json out = Json::object();
    for (const auto& spec : schema) {
        const bool present = given.is_object() && given.contains(spec.key) && !given[spec.key].is_null();
        if (present)
            out[spec.key] = check_type(spec, given[spec.key]);
        else if (spec.required)
            throw ConfigError("missing required key '" + spec.key + "' for command '" + command + "'");
        else
            out[spec.key] = spec.default_value;
    }
    return out;
}

Json run_command(const std::string& command, const Json& given) {
    Json params = resolve_params(command, given);
    Json result;
    if (command == "simulate") result = run_simulate(params);
    else if (command == "pair") result = run_pair(params);
    else if (command == "polygon") result = run_polygon(params);
    else if (command == "array") result = run_array(params);
    else if (command == "plasma") result = run_plasma(params);
    else if (command == "nondegeneracy") result = run_nondegeneracy(params);
    else if (command == "ansatz-error") result = run_ansatz_error(params);
    else if (command == "reduced-root") result = run_reduced_root(params);
    else throw ConfigError("unknown command '" + command + "'");
    for (auto& [key, value] : params.items())
        if (value.is_number_float()) value = num(value.get<double>());
        else if (value.is_array())
            for (auto& e : value)
                if (e.is_number_float()) e = num(e.get<double>());
    Json report;
    report["command"] = command;
    report["params"] = params;
    report["result"] = result;
    return report;
}

}  // namespace sqg

#include "sqglab.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "sqglab/equilibria.hpp"
#include "sqglab/error.hpp"
#include "sqglab/pipeline.hpp"
#include "sqglab/plasma.hpp"
#include "sqglab/point_vortex.hpp"

struct sqg_string {
    std::string text;
};
struct sqg_config {
    sqg::VortexConfig config;
};
struct sqg_trajectory {
    sqg::Trajectory traj;
};
struct sqg_solution {
    sqg::EquilibriumSolution sol;
};
struct sqg_profile {
    sqg::RadialProfile profile;
};

namespace {

thread_local std::string last_error;

sqg_status fail(sqg_status code, const char* what) {
    last_error = what;
    return code;
}

template <class F>
sqg_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return SQG_OK;
    } catch (const sqg::SingularityError& e) {
        return fail(SQG_E_SINGULAR, e.what());
    } catch (const sqg::ConvergenceError& e) {
        return fail(SQG_E_CONVERGENCE, e.what());
    } catch (const sqg::ConfigError& e) {
        return fail(SQG_E_CONFIG, e.what());
    } catch (const sqg::DomainError& e) {
        return fail(SQG_E_DOMAIN, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(SQG_E_CONFIG, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SQG_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SQG_E_INTERNAL, e.what());
    } catch (...) {
        return fail(SQG_E_INTERNAL, "unknown error");
    }
}

#define SQG_REQUIRE(cond, msg) \
    if (!(cond)) return fail(SQG_E_ARGUMENT, msg)

sqg_status emit(const sqg::Json& j, sqg_string** out) {
    return guarded([&] { *out = new sqg_string{j.dump(2)}; });
}

}  // namespace

extern "C" {

const char* sqg_version(void) { return "0.1.0"; }

const char* sqg_status_name(sqg_status status) {
    switch (status) {
        case SQG_OK: return "ok";
        case SQG_E_DOMAIN: return "domain error";
        case SQG_E_SINGULAR: return "singularity";
        case SQG_E_CONVERGENCE: return "no convergence";
        case SQG_E_CONFIG: return "configuration error";
        case SQG_E_ARGUMENT: return "invalid argument";
        case SQG_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* sqg_last_error(void) { return last_error.c_str(); }

const char* sqg_string_data(const sqg_string* str) { return str ? str->text.c_str() : ""; }
size_t sqg_string_size(const sqg_string* str) { return str ? str->text.size() : 0; }
void sqg_string_free(sqg_string* str) { delete str; }

sqg_status sqg_commands(sqg_string** out) {
    SQG_REQUIRE(out, "null output pointer");
    *out = nullptr;
    return emit(sqg::Json(sqg::command_names()), out);
}

sqg_status sqg_command_schema(const char* command, sqg_string** out) {
    SQG_REQUIRE(command && out, "null argument");
    *out = nullptr;
    sqg::Json arr = sqg::Json::array();
    const sqg_status st = guarded([&] {
        for (const auto& spec : sqg::command_schema(command))
            arr.push_back({{"key", spec.key},
                           {"type", sqg::to_string(spec.type)},
                           {"required", spec.required},
                           {"default", spec.default_value},
                           {"help", spec.help}});
    });
    if (st != SQG_OK) return st;
    return emit(arr, out);
}

sqg_status sqg_run(const char* command, const char* params_json, sqg_string** out) {
    SQG_REQUIRE(command && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        sqg::Json params = sqg::Json::object();
        if (params_json && *params_json) {
            try {
                params = sqg::Json::parse(params_json);
            } catch (const nlohmann::json::parse_error& e) {
                throw sqg::ConfigError(std::string("malformed parameter JSON: ") + e.what());
            }
        }
        const sqg::Json report = sqg::run_command(command, params);
        *out = new sqg_string{report.dump(2)};
    });
}

sqg_status sqg_config_make(size_t k, const double* positions, const double* intensities, double s,
                           sqg_config** out) {
    SQG_REQUIRE(out, "null output pointer");
    *out = nullptr;
    SQG_REQUIRE(k > 0 && positions && intensities, "empty configuration");
    return guarded([&] {
        auto c = std::make_unique<sqg_config>();
        for (size_t i = 0; i < k; ++i) {
            c->config.positions.push_back({positions[2 * i], positions[2 * i + 1]});
            c->config.intensities.push_back(intensities[i]);
        }
        c->config.s = s;
        c->config.validate();
        *out = c.release();
    });
}

void sqg_config_free(sqg_config* config) { delete config; }

size_t sqg_config_size(const sqg_config* config) { return config ? config->config.size() : 0; }

sqg_status sqg_config_velocities(const sqg_config* config, double* out_uv) {
    SQG_REQUIRE(config && out_uv, "null argument");
    return guarded([&] {
        const auto v = sqg::velocities(config->config);
        for (size_t i = 0; i < v.size(); ++i) {
            out_uv[2 * i] = v[i].x;
            out_uv[2 * i + 1] = v[i].y;
        }
    });
}

sqg_status sqg_config_invariants(const sqg_config* config, double* out4) {
    SQG_REQUIRE(config && out4, "null argument");
    return guarded([&] {
        const auto inv = sqg::invariants(config->config);
        out4[0] = inv.H;
        out4[1] = inv.P.x;
        out4[2] = inv.P.y;
        out4[3] = inv.L;
    });
}

sqg_status sqg_integrate(const sqg_config* config, double T, double tol, sqg_trajectory** out) {
    SQG_REQUIRE(config && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        sqg::IntegratorOptions opt;
        if (tol > 0.0) opt.tol = tol;
        auto t = std::make_unique<sqg_trajectory>();
        t->traj = sqg::integrate(config->config, T, opt);
        *out = t.release();
    });
}

void sqg_trajectory_free(sqg_trajectory* traj) { delete traj; }

size_t sqg_trajectory_length(const sqg_trajectory* traj) { return traj ? traj->traj.size() : 0; }

sqg_status sqg_trajectory_snapshot(const sqg_trajectory* traj, size_t index, double* time,
                                   double* positions) {
    SQG_REQUIRE(traj, "null trajectory");
    SQG_REQUIRE(index < traj->traj.size(), "snapshot index out of range");
    if (time) *time = traj->traj.times[index];
    if (positions) {
        const auto& st = traj->traj.states[index];
        for (size_t i = 0; i < st.size(); ++i) {
            positions[2 * i] = st[i].x;
            positions[2 * i + 1] = st[i].y;
        }
    }
    return SQG_OK;
}

sqg_status sqg_trajectory_drift(const sqg_trajectory* traj, double* out3) {
    SQG_REQUIRE(traj && out3, "null argument");
    out3[0] = traj->traj.invariant_drift.H_rel;
    out3[1] = traj->traj.invariant_drift.P_abs;
    out3[2] = traj->traj.invariant_drift.L_rel;
    return SQG_OK;
}

sqg_status sqg_pair(double d, double m, double s, sqg_solution** out) {
    SQG_REQUIRE(out, "null output pointer");
    *out = nullptr;
    return guarded([&] { *out = new sqg_solution{sqg::vortex_pair(d, m, s)}; });
}

sqg_status sqg_polygon(int k, double rho, double m, double s, sqg_solution** out) {
    SQG_REQUIRE(out, "null output pointer");
    *out = nullptr;
    return guarded([&] { *out = new sqg_solution{sqg::rotating_polygon(k, rho, m, s)}; });
}

void sqg_solution_free(sqg_solution* sol) { delete sol; }

double sqg_solution_motion(const sqg_solution* sol) { return sol ? sol->sol.motion.value : 0.0; }

double sqg_solution_residual(const sqg_solution* sol) { return sol ? sol->sol.residual_norm : 0.0; }

sqg_status sqg_solution_config(const sqg_solution* sol, sqg_config** out) {
    SQG_REQUIRE(sol && out, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new sqg_config{sol->sol.config}; });
}

sqg_status sqg_ground_state(double s, double gamma, int N, sqg_profile** out) {
    SQG_REQUIRE(out, "null output pointer");
    *out = nullptr;
    return guarded([&] {
        sqg::GridSpec g;
        if (N > 0) g.N = N;
        auto p = std::make_unique<sqg_profile>();
        p->profile = sqg::solve_ground_state({2, s, gamma}, g);
        *out = p.release();
    });
}

void sqg_profile_free(sqg_profile* profile) { delete profile; }

double sqg_profile_R0(const sqg_profile* profile) { return profile ? profile->profile.R0 : 0.0; }

double sqg_profile_mass(const sqg_profile* profile) { return profile ? profile->profile.Mgamma : 0.0; }

sqg_status sqg_profile_eval(const sqg_profile* profile, double r, double* W) {
    SQG_REQUIRE(profile && W, "null argument");
    return guarded([&] { *W = sqg::evaluate_W(profile->profile, r); });
}

}  // extern "C"

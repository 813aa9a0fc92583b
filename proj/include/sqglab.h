#ifndef SQGLAB_H
#define SQGLAB_H

#include <stddef.h>

#if defined(SQG_BUILDING_LIBRARY)
#define SQG_API __attribute__((visibility("default")))
#else
#define SQG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqg_status {
    SQG_OK = 0,
    SQG_E_DOMAIN = 1,
    SQG_E_SINGULAR = 2,
    SQG_E_CONVERGENCE = 3,
    SQG_E_CONFIG = 4,
    SQG_E_ARGUMENT = 5,
    SQG_E_INTERNAL = 6
} sqg_status;

typedef struct sqg_string sqg_string;
typedef struct sqg_config sqg_config;
typedef struct sqg_trajectory sqg_trajectory;
typedef struct sqg_solution sqg_solution;
typedef struct sqg_profile sqg_profile;

SQG_API const char* sqg_version(void);
SQG_API const char* sqg_status_name(sqg_status status);
/* Message of the last failing call on this thread ("" if none). */
SQG_API const char* sqg_last_error(void);

SQG_API const char* sqg_string_data(const sqg_string* str);
SQG_API size_t sqg_string_size(const sqg_string* str);
SQG_API void sqg_string_free(sqg_string* str);

/* JSON list of command names. */
SQG_API sqg_status sqg_commands(sqg_string** out);
/* JSON array of {key, type, required, default, help}. */
SQG_API sqg_status sqg_command_schema(const char* command, sqg_string** out);
/* params_json is a JSON object; the report is {"command", "params", "result"}. */
SQG_API sqg_status sqg_run(const char* command, const char* params_json, sqg_string** out);

/* positions holds x1, y1, ..., xk, yk. */
SQG_API sqg_status sqg_config_make(size_t k, const double* positions, const double* intensities,
                                   double s, sqg_config** out);
SQG_API void sqg_config_free(sqg_config* config);
SQG_API size_t sqg_config_size(const sqg_config* config);
SQG_API sqg_status sqg_config_velocities(const sqg_config* config, double* out_uv);
/* out4 receives H, P_x, P_y, L. */
SQG_API sqg_status sqg_config_invariants(const sqg_config* config, double* out4);

SQG_API sqg_status sqg_integrate(const sqg_config* config, double T, double tol,
                                 sqg_trajectory** out);
SQG_API void sqg_trajectory_free(sqg_trajectory* traj);
SQG_API size_t sqg_trajectory_length(const sqg_trajectory* traj);
SQG_API sqg_status sqg_trajectory_snapshot(const sqg_trajectory* traj, size_t index, double* time,
                                           double* positions);
/* out3 receives the relative H drift, absolute P drift and relative L drift. */
SQG_API sqg_status sqg_trajectory_drift(const sqg_trajectory* traj, double* out3);

SQG_API sqg_status sqg_pair(double d, double m, double s, sqg_solution** out);
SQG_API sqg_status sqg_polygon(int k, double rho, double m, double s, sqg_solution** out);
SQG_API void sqg_solution_free(sqg_solution* sol);
/* Speed c for traveling solutions, angular velocity for rotating ones. */
SQG_API double sqg_solution_motion(const sqg_solution* sol);
SQG_API double sqg_solution_residual(const sqg_solution* sol);
SQG_API sqg_status sqg_solution_config(const sqg_solution* sol, sqg_config** out);

SQG_API sqg_status sqg_ground_state(double s, double gamma, int N, sqg_profile** out);
SQG_API void sqg_profile_free(sqg_profile* profile);
SQG_API double sqg_profile_R0(const sqg_profile* profile);
SQG_API double sqg_profile_mass(const sqg_profile* profile);
SQG_API sqg_status sqg_profile_eval(const sqg_profile* profile, double r, double* W);

#ifdef __cplusplus
}
#endif

#endif

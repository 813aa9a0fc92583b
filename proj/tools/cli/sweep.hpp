#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace sqgcli {

struct SweepSpec {
    std::string task;
    std::string param;
    std::vector<Json> values;
    Json base = Json::object();
    int jobs = 1;
};

/// Resolves the pool size: explicit value if positive, else SQGLAB_JOBS, else hardware threads.
int resolve_jobs(int requested);

/// Runs every value independently on a pool of `jobs` workers; runs appear in input order.
/// The exit code is the largest over the runs.
Json run_sweep(const SweepSpec& spec, int& exit);

}  // namespace sqgcli

#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace sqgcli {

int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SQGLAB_JOBS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v <= 0 || v > 4096) throw UsageError("SQGLAB_JOBS must be a positive integer");
        return static_cast<int>(v);
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Json run_sweep(const SweepSpec& spec, int& exit) {
    const std::size_t n = spec.values.size();
    std::vector<Json> runs(n);
    std::vector<int> codes(n, 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            RunConfig cfg{spec.task, spec.base, {}};
            cfg.params[spec.param] = spec.values[i];
            Json report;
            std::string error;
            const sqg_status st = run(cfg, report, error);
            codes[i] = exit_code(st);
            Json entry;
            entry["value"] = spec.values[i];
            entry["exit_code"] = codes[i];
            if (st == SQG_OK)
                entry["report"] = std::move(report);
            else
                entry["error"] = error;
            runs[i] = std::move(entry);
        }
    };
    const int jobs = std::clamp<int>(spec.jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    exit = 0;
    for (int c : codes) exit = std::max(exit, c);
    Json out;
    out["command"] = "sweep";
    out["task"] = spec.task;
    out["param"] = spec.param;
    out["base"] = spec.base;
    out["runs"] = std::move(runs);
    return out;
}

}  // namespace sqgcli

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "sqglab/vec2.hpp"

namespace sqg {

/// k planar point vortices with intensities m_j, moving under the generalized SQG law of order s.
struct VortexConfig {
    std::vector<Vec2> positions;
    std::vector<double> intensities;
    double s = 0.5;

    std::size_t size() const { return positions.size(); }

    /// Throws DomainError on empty/mismatched/non-finite data or s outside (0, 1],
    /// SingularityError if two vortices coincide.
    void validate() const;
    double min_separation() const;
};

/// K(s) sum_{i != j} m_i (xi_i - xi_j)^perp / |xi_i - xi_j|^{4-2s}
Vec2 velocity(const VortexConfig& config, std::size_t j);
std::vector<Vec2> velocities(const VortexConfig& config);

struct Invariants {
    double H = 0.0;  ///< pair energy
    Vec2 P;          ///< sum m_i xi_i
    double L = 0.0;  ///< sum m_i |xi_i|^2
};

/// H uses the coefficient Gamma(1-s)/(2^{2s} pi Gamma(s)) over unordered pairs; at s = 1 the
/// logarithmic Kirchhoff energy -(1/2pi) sum m_i m_j log|xi_i - xi_j| is used instead.
Invariants invariants(const VortexConfig& config);

struct IntegratorOptions {
    double tol = 1e-10;
    /// Early stop once the minimum separation falls below this fraction of its initial value.
    double collision_factor = 1e-6;
    double initial_step = 0.0;  ///< 0 selects a step from the velocity scale
    std::size_t max_steps = 2'000'000;
};

struct InvariantDrift {
    double H_rel = 0.0;
    double P_abs = 0.0;
    double L_rel = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<Vec2>> states;
    std::vector<double> intensities;
    double s = 0.5;
    InvariantDrift invariant_drift;
    bool collided = false;
    std::size_t rejected_steps = 0;

    std::size_t size() const { return times.size(); }
    VortexConfig config_at(std::size_t i) const;
};

/// Dormand-Prince 5(4) with PI step control; every accepted step is recorded and the
/// last snapshot lands exactly on T unless a collision stops the run early.
Trajectory integrate(const VortexConfig& config, double T, const IntegratorOptions& options = {});

struct Motion2D {
    Vec2 drift_velocity;
    double rotation_rate = 0.0;
};

/// Least-squares centroid drift and rigid rotation rate (angle about the centroid vs. time).
Motion2D measure_motion(const Trajectory& trajectory);

/// Columns t, x_1, y_1, ..., x_k, y_k, H, P_x, P_y, L.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace sqg

#include "sqglab/point_vortex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "sqglab/constants.hpp"
#include "sqglab/error.hpp"

namespace sqg {

void VortexConfig::validate() const {
    if (positions.empty()) throw DomainError("VortexConfig: no vortices");
    if (positions.size() != intensities.size())
        throw DomainError("VortexConfig: positions and intensities differ in length");
    if (!(s > 0.0 && s <= 1.0))
        throw DomainError("VortexConfig: s=" + std::to_string(s) + " outside (0, 1]");
    for (std::size_t i = 0; i < size(); ++i) {
        if (!std::isfinite(positions[i].x) || !std::isfinite(positions[i].y))
            throw DomainError("VortexConfig: non-finite position");
        if (!std::isfinite(intensities[i]) || intensities[i] == 0.0)
            throw DomainError("VortexConfig: intensities must be finite and nonzero");
    }
    if (size() > 1 && min_separation() == 0.0)
        throw SingularityError("VortexConfig: coincident vortices");
}

double VortexConfig::min_separation() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            best = std::min(best, norm(positions[i] - positions[j]));
    return best;
}

namespace {

// Velocities from raw positions; the hot path of the integrator.
void eval_velocities(std::span<const Vec2> pos, std::span<const double> m, double s, double K,
                     std::span<Vec2> out) {
    const std::size_t k = pos.size();
    std::fill(out.begin(), out.end(), Vec2{});
    const double e = s - 2.0;  // |d|^{2s-4} = (|d|^2)^{s-2}
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const Vec2 d = pos[i] - pos[j];
            const double r2 = norm2(d);
            if (r2 == 0.0) throw SingularityError("velocity: coincident vortices");
            const Vec2 w = std::pow(r2, e) * perp(d);
            out[j] += m[i] * w;  // (xi_i - xi_j)^perp
            out[i] -= m[j] * w;
        }
    }
    for (auto& v : out) v *= K;
}

}  // namespace

Vec2 velocity(const VortexConfig& config, std::size_t j) {
    if (j >= config.size()) throw DomainError("velocity: index out of range");
    const double K = interaction_constant(config.s);
    Vec2 v;
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (i == j) continue;
        const Vec2 d = config.positions[i] - config.positions[j];
        const double r2 = norm2(d);
        if (r2 == 0.0) throw SingularityError("velocity: coincident vortices");
        v += config.intensities[i] * std::pow(r2, config.s - 2.0) * perp(d);
    }
    return K * v;
}

std::vector<Vec2> velocities(const VortexConfig& config) {
    std::vector<Vec2> out(config.size());
    eval_velocities(config.positions, config.intensities, config.s,
                    interaction_constant(config.s), out);
    return out;
}

Invariants invariants(const VortexConfig& config) {
    Invariants inv;
    const std::size_t k = config.size();
    const bool euler = config.s == 1.0;
    const double C = euler ? -1.0 / (2.0 * kPi) : hamiltonian_constant(config.s);
    for (std::size_t i = 0; i < k; ++i) {
        const double mi = config.intensities[i];
        inv.P += mi * config.positions[i];
        inv.L += mi * norm2(config.positions[i]);
        for (std::size_t j = i + 1; j < k; ++j) {
            const double r2 = norm2(config.positions[i] - config.positions[j]);
            if (r2 == 0.0) throw SingularityError("invariants: coincident vortices");
            const double g = euler ? 0.5 * std::log(r2) : std::pow(r2, config.s - 1.0);
            inv.H += mi * config.intensities[j] * g;
        }
    }
    inv.H *= C;
    return inv;
}

VortexConfig Trajectory::config_at(std::size_t i) const {
    return VortexConfig{states.at(i), intensities, s};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (difference between the 5th and embedded 4th order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double relative_change(double now, double ref) {
    const double scale = std::abs(ref);
    return scale > 0.0 ? std::abs(now - ref) / scale : std::abs(now - ref);
}

}  // namespace

Trajectory integrate(const VortexConfig& config, double T, const IntegratorOptions& opt) {
    config.validate();
    if (!(T > 0.0)) throw DomainError("integrate: duration must be positive");
    if (!(opt.tol > 0.0)) throw DomainError("integrate: tolerance must be positive");

    const std::size_t k = config.size();
    const double s = config.s;
    const double K = interaction_constant(s);
    const auto& m = config.intensities;

    Trajectory traj;
    traj.intensities = m;
    traj.s = s;
    traj.times.push_back(0.0);
    traj.states.push_back(config.positions);

    const Invariants inv0 = invariants(config);
    if (k == 1) {
        // No interactions: the vortex sits still.
        for (double t : {0.5 * T, T}) {
            traj.times.push_back(t);
            traj.states.push_back(config.positions);
        }
        return traj;
    }

    const double min_sep0 = config.min_separation();
    const double collision_threshold = opt.collision_factor * min_sep0;

    std::vector<Vec2> y = config.positions, ytmp(k), ynew(k);
    std::array<std::vector<Vec2>, 7> kk;
    for (auto& v : kk) v.resize(k);
    auto f = [&](std::span<const Vec2> pos, std::span<Vec2> out) {
        eval_velocities(pos, m, s, K, out);
    };
    f(y, kk[0]);

    double h = opt.initial_step;
    if (h <= 0.0) {
        double vmax = 0.0;
        for (const auto& v : kk[0]) vmax = std::max(vmax, norm(v));
        h = vmax > 0.0 ? 0.01 * min_sep0 / vmax : T;
        h = std::min(h, T);
    }

    const double safety = 0.9, alpha = 0.7 / 5.0, beta = 0.4 / 5.0;
    double err_prev = 1e-4;
    double t = 0.0;
    std::size_t steps = 0;

    auto stage = [&](std::initializer_list<std::pair<double, const std::vector<Vec2>*>> terms) {
        for (std::size_t i = 0; i < k; ++i) {
            Vec2 acc = y[i];
            for (const auto& [a, kv] : terms) acc += h * a * (*kv)[i];
            ytmp[i] = acc;
        }
    };

    while (t < T) {
        if (++steps > opt.max_steps) throw ConvergenceError("integrate: step budget exhausted", h);
        bool last = false;
        if (t + h >= T) {
            h = T - t;
            last = true;
        }
        stage({{a21, &kk[0]}});
        f(ytmp, kk[1]);
        stage({{a31, &kk[0]}, {a32, &kk[1]}});
        f(ytmp, kk[2]);
        stage({{a41, &kk[0]}, {a42, &kk[1]}, {a43, &kk[2]}});
        f(ytmp, kk[3]);
        stage({{a51, &kk[0]}, {a52, &kk[1]}, {a53, &kk[2]}, {a54, &kk[3]}});
        f(ytmp, kk[4]);
        stage({{a61, &kk[0]}, {a62, &kk[1]}, {a63, &kk[2]}, {a64, &kk[3]}, {a65, &kk[4]}});
        f(ytmp, kk[5]);
        for (std::size_t i = 0; i < k; ++i)
            ynew[i] = y[i] + h * (b1 * kk[0][i] + b3 * kk[2][i] + b4 * kk[3][i] +
                                  b5 * kk[4][i] + b6 * kk[5][i]);
        f(ynew, kk[6]);

        // Mixed absolute/relative error per coordinate, scaled so err <= 1 meets tol.
        double err = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const Vec2 e = h * (e1 * kk[0][i] + e3 * kk[2][i] + e4 * kk[3][i] + e5 * kk[4][i] +
                                e6 * kk[5][i] + e7 * kk[6][i]);
            const double sx = opt.tol * (1.0 + std::max(std::abs(y[i].x), std::abs(ynew[i].x)));
            const double sy = opt.tol * (1.0 + std::max(std::abs(y[i].y), std::abs(ynew[i].y)));
            err = std::max({err, std::abs(e.x) / sx, std::abs(e.y) / sy});
        }

        if (err <= 1.0) {
            t = last ? T : t + h;
            y.swap(ynew);
            std::swap(kk[0], kk[6]);
            traj.times.push_back(t);
            traj.states.push_back(y);

            double sep = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i + 1; j < k; ++j) sep = std::min(sep, norm(y[i] - y[j]));
            if (sep < collision_threshold) {
                traj.collided = true;
                break;
            }

            const double e = std::max(err, 1e-10);
            double fac = safety * std::pow(e, -alpha) * std::pow(err_prev, beta);
            fac = std::clamp(fac, 0.2, 5.0);
            h *= fac;
            err_prev = e;
        } else {
            ++traj.rejected_steps;
            h *= std::max(0.2, safety * std::pow(err, -alpha));
        }
    }

    for (std::size_t i = 1; i < traj.size(); ++i) {
        const Invariants inv = invariants(traj.config_at(i));
        auto& d = traj.invariant_drift;
        d.H_rel = std::max(d.H_rel, relative_change(inv.H, inv0.H));
        d.L_rel = std::max(d.L_rel, relative_change(inv.L, inv0.L));
        d.P_abs = std::max(d.P_abs, norm(inv.P - inv0.P));
    }
    return traj;
}

Motion2D measure_motion(const Trajectory& traj) {
    const std::size_t n = traj.size();
    if (n < 3) throw DomainError("measure_motion: need at least 3 snapshots");
    const std::size_t k = traj.states.front().size();

    std::vector<Vec2> centroid(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 c;
        for (const auto& p : traj.states[i]) c += p;
        centroid[i] = (1.0 / double(k)) * c;
    }

    // Unwrapped rotation angle of each snapshot relative to the first, about the centroid.
    std::vector<double> angle(n, 0.0);
    double prev = 0.0, offset = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        double sc = 0.0, ss = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const Vec2 a = traj.states[0][j] - centroid[0];
            const Vec2 b = traj.states[i][j] - centroid[i];
            sc += dot(a, b);
            ss += cross(a, b);
        }
        double th = (sc == 0.0 && ss == 0.0) ? 0.0 : std::atan2(ss, sc);
        if (th + offset - prev > kPi) offset -= 2.0 * kPi;
        if (th + offset - prev < -kPi) offset += 2.0 * kPi;
        angle[i] = th + offset;
        prev = angle[i];
    }

    double tm = 0.0;
    for (double t : traj.times) tm += t;
    tm /= double(n);
    double stt = 0.0;
    for (double t : traj.times) stt += (t - tm) * (t - tm);
    if (!(stt > 0.0)) throw DomainError("measure_motion: degenerate time samples");

    Vec2 cm;
    double am = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cm += centroid[i];
        am += angle[i];
    }
    cm *= 1.0 / double(n);
    am /= double(n);
    Motion2D out;
    double sa = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = traj.times[i] - tm;
        out.drift_velocity += dt * (centroid[i] - cm);
        sa += dt * (angle[i] - am);
    }
    out.drift_velocity *= 1.0 / stt;
    out.rotation_rate = sa / stt;
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const std::size_t k = traj.intensities.size();
    out << "t";
    for (std::size_t j = 1; j <= k; ++j) out << ",x_" << j << ",y_" << j;
    out << ",H,P_x,P_y,L\n";
    const auto old_prec = out.precision(17);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Invariants inv = invariants(traj.config_at(i));
        out << traj.times[i];
        for (const auto& p : traj.states[i]) out << ',' << p.x << ',' << p.y;
        out << ',' << inv.H << ',' << inv.P.x << ',' << inv.P.y << ',' << inv.L << '\n';
    }
    out.precision(old_prec);
}

}  // namespace sqg

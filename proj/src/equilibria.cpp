#include "sqglab/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sqglab/constants.hpp"
#include "sqglab/error.hpp"

namespace sqg {

namespace {

void require_distinct(const VortexConfig& config, const char* who) {
    if (config.size() > 1 && config.min_separation() == 0.0)
        throw SingularityError(std::string(who) + ": coincident points");
}

// sum_{i != j} m_i (b_i - b_j) |b_i - b_j|^{2s-4}, unscaled.
std::vector<Vec2> pair_sums(const VortexConfig& config) {
    const std::size_t k = config.size();
    std::vector<Vec2> out(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const Vec2 d = config.positions[i] - config.positions[j];
            const double r2 = norm2(d);
            if (r2 == 0.0) throw SingularityError("equilibria: coincident points");
            const Vec2 w = std::pow(r2, config.s - 2.0) * d;
            out[j] += config.intensities[i] * w;
            out[i] -= config.intensities[j] * w;
        }
    return out;
}

double pair_energy(const VortexConfig& config) {
    double e = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i)
        for (std::size_t j = i + 1; j < config.size(); ++j) {
            const double r2 = norm2(config.positions[i] - config.positions[j]);
            if (r2 == 0.0) throw SingularityError("equilibria: coincident points");
            e += config.intensities[i] * config.intensities[j] * std::pow(r2, config.s - 1.0);
        }
    return hamiltonian_constant(config.s) * e;
}

VortexConfig with_positions(const VortexConfig& base, const Eigen::VectorXd& x) {
    VortexConfig c = base;
    c.positions = unflatten(x, Eigen::Index(base.size()));
    return c;
}

Eigen::MatrixXd fd_hessian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                           const Eigen::VectorXd& x, double rel_step) {
    return fd_jacobian(grad, x, rel_step);
}

}  // namespace

Eigen::VectorXd flatten(std::span<const Vec2> points) {
    Eigen::VectorXd v(2 * Eigen::Index(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        v(2 * Eigen::Index(i)) = points[i].x;
        v(2 * Eigen::Index(i) + 1) = points[i].y;
    }
    return v;
}

std::vector<Vec2> unflatten(const Eigen::VectorXd& v, Eigen::Index count, Eigen::Index offset) {
    std::vector<Vec2> out(static_cast<std::size_t>(count));
    for (Eigen::Index i = 0; i < count; ++i)
        out[std::size_t(i)] = {v(offset + 2 * i), v(offset + 2 * i + 1)};
    return out;
}

Eigen::VectorXd traveling_residual(const VortexConfig& config, double c) {
    require_distinct(config, "traveling_residual");
    const auto vel = velocities(config);
    Eigen::VectorXd r(2 * Eigen::Index(config.size()));
    for (std::size_t j = 0; j < config.size(); ++j) {
        r(2 * Eigen::Index(j)) = -vel[j].x;
        r(2 * Eigen::Index(j) + 1) = c - vel[j].y;
    }
    return r;
}

Eigen::VectorXd rotating_residual(const VortexConfig& config, double alpha) {
    require_distinct(config, "rotating_residual");
    const double K = interaction_constant(config.s);
    const auto sums = pair_sums(config);
    Eigen::VectorXd r(2 * Eigen::Index(config.size()));
    for (std::size_t j = 0; j < config.size(); ++j) {
        const Vec2 v = alpha * config.positions[j] + K * sums[j];
        r(2 * Eigen::Index(j)) = v.x;
        r(2 * Eigen::Index(j) + 1) = v.y;
    }
    return r;
}

EquilibriumSolution vortex_pair(double d, double m, double s) {
    if (!(d > 0.0)) throw DomainError("vortex_pair: separation d must be positive");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("vortex_pair: s outside (0, 1]");
    if (m == 0.0 || !std::isfinite(m)) throw DomainError("vortex_pair: m must be nonzero");
    EquilibriumSolution sol;
    sol.config = VortexConfig{{{d, 0.0}, {-d, 0.0}}, {m, -m}, s};
    const double c = -gamma_fn(2.0 - s) * m / (4.0 * kPi * gamma_fn(s) * std::pow(d, 3.0 - 2.0 * s));
    sol.motion = {MotionKind::traveling, c};
    sol.residual_norm = traveling_residual(sol.config, c).lpNorm<Eigen::Infinity>();
    return sol;
}

double polygon_angular_velocity(int k, double rho, double m, double s) {
    if (k < 2) throw DomainError("rotating_polygon: need k >= 2");
    if (!(rho > 0.0)) throw DomainError("rotating_polygon: radius must be positive");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("rotating_polygon: s outside (0, 1]");
    double sum = 0.0;
    for (int l = 1; l < k; ++l) sum += std::pow(1.0 - std::cos(2.0 * kPi * l / k), -(1.0 - s));
    return m * std::pow(rho, 2.0 * s - 4.0) * gamma_fn(2.0 - s) /
           (std::pow(2.0, s + 1.0) * kPi * gamma_fn(s)) * sum;
}

EquilibriumSolution rotating_polygon(int k, double rho, double m, double s) {
    const double alpha = polygon_angular_velocity(k, rho, m, s);
    if (m == 0.0 || !std::isfinite(m)) throw DomainError("rotating_polygon: m must be nonzero");
    EquilibriumSolution sol;
    sol.config.s = s;
    for (int j = 0; j < k; ++j) {
        const double t = 2.0 * kPi * j / k;
        sol.config.positions.push_back({rho * std::cos(t), rho * std::sin(t)});
        sol.config.intensities.push_back(m);
    }
    sol.motion = {MotionKind::rotating, alpha};
    sol.residual_norm = rotating_residual(sol.config, alpha).lpNorm<Eigen::Infinity>();
    return sol;
}

double energy_I(const VortexConfig& config, double c) {
    double lin = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i)
        lin += config.intensities[i] * config.positions[i].x;
    return c * lin + pair_energy(config);
}

Eigen::VectorXd grad_I(const VortexConfig& config, double c) {
    const double K = interaction_constant(config.s);
    const auto sums = pair_sums(config);
    Eigen::VectorXd g(2 * Eigen::Index(config.size()));
    for (std::size_t j = 0; j < config.size(); ++j) {
        const double mj = config.intensities[j];
        g(2 * Eigen::Index(j)) = mj * (c + K * sums[j].x);
        g(2 * Eigen::Index(j) + 1) = mj * K * sums[j].y;
    }
    return g;
}

double energy_J(const VortexConfig& config, double alpha) {
    double quad = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i)
        quad += config.intensities[i] * norm2(config.positions[i]);
    return 0.5 * alpha * quad + pair_energy(config);
}

Eigen::VectorXd grad_J(const VortexConfig& config, double alpha) {
    const double K = interaction_constant(config.s);
    const auto sums = pair_sums(config);
    Eigen::VectorXd g(2 * Eigen::Index(config.size()));
    for (std::size_t j = 0; j < config.size(); ++j) {
        const double mj = config.intensities[j];
        const Vec2 v = mj * (alpha * config.positions[j] + K * sums[j]);
        g(2 * Eigen::Index(j)) = v.x;
        g(2 * Eigen::Index(j) + 1) = v.y;
    }
    return g;
}

Eigen::MatrixXd hessian_I(const VortexConfig& config, double c, double rel_step) {
    return fd_hessian(
        [&](const Eigen::VectorXd& x) { return grad_I(with_positions(config, x), c); },
        flatten(config.positions), rel_step);
}

Eigen::MatrixXd hessian_J(const VortexConfig& config, double alpha, double rel_step) {
    return fd_hessian(
        [&](const Eigen::VectorXd& x) { return grad_J(with_positions(config, x), alpha); },
        flatten(config.positions), rel_step);
}

// --- symmetric arrays -------------------------------------------------------------------------

void SymmetricArrayParams::validate() const {
    if (k == 0) throw DomainError("SymmetricArrayParams: k must be positive");
    if (2 * pairs > k) throw DomainError("SymmetricArrayParams: more conjugate pairs than vortices");
    if (coords.size() != free_count())
        throw DomainError("SymmetricArrayParams: expected " + std::to_string(free_count()) +
                          " free coordinates, got " + std::to_string(coords.size()));
}

std::pair<std::vector<Vec2>, std::vector<Vec2>> SymmetricArrayParams::reconstruct() const {
    validate();
    std::vector<Vec2> p, q;
    for (std::size_t j = 0; j < pairs; ++j) {
        const double x = coords[2 * j], y = coords[2 * j + 1];
        p.push_back({x, y});
        p.push_back({x, -y});
    }
    for (std::size_t t = 2 * pairs; t < k; ++t) p.push_back({coords[t], 0.0});
    for (const auto& pt : p) q.push_back({-pt.x, pt.y});
    return {p, q};
}

VortexConfig SymmetricArrayParams::to_config(double s) const {
    auto [p, q] = reconstruct();
    VortexConfig c;
    c.s = s;
    for (const auto& pt : p) {
        c.positions.push_back(pt);
        c.intensities.push_back(1.0);
    }
    for (const auto& pt : q) {
        c.positions.push_back(pt);
        c.intensities.push_back(-1.0);
    }
    return c;
}

Eigen::VectorXd balancing_residual(std::span<const Vec2> p, std::span<const Vec2> q, double c,
                                   double s) {
    if (p.size() != q.size() || p.empty())
        throw DomainError("balancing_residual: p and q must be nonempty and of equal length");
    const double e = s - 2.0;
    auto term = [e](Vec2 a, Vec2 b) {
        const Vec2 d = a - b;
        const double r2 = norm2(d);
        if (r2 == 0.0) throw SingularityError("balancing_residual: coincident points");
        return std::pow(r2, e) * d;
    };
    const double rhs = c / interaction_constant(s);
    const std::size_t k = p.size();
    Eigen::VectorXd r(4 * Eigen::Index(k));
    for (std::size_t i = 0; i < k; ++i) {
        Vec2 v;
        for (std::size_t j = 0; j < k; ++j)
            if (j != i) v += term(p[i], p[j]);
        for (std::size_t l = 0; l < k; ++l) v -= term(p[i], q[l]);
        r(2 * Eigen::Index(i)) = v.x - rhs;
        r(2 * Eigen::Index(i) + 1) = v.y;
    }
    for (std::size_t m = 0; m < k; ++m) {
        Vec2 v;
        for (std::size_t l = 0; l < k; ++l)
            if (l != m) v += term(q[m], q[l]);
        for (std::size_t j = 0; j < k; ++j) v -= term(q[m], p[j]);
        r(2 * Eigen::Index(k + m)) = v.x + rhs;
        r(2 * Eigen::Index(k + m) + 1) = v.y;
    }
    return r;
}

Eigen::VectorXd symmetric_array_residual(const SymmetricArrayParams& params, double s) {
    const auto [p, q] = params.reconstruct();
    const Eigen::VectorXd full = balancing_residual(p, q, params.c, s);
    Eigen::VectorXd r(Eigen::Index(params.free_count()));
    Eigen::Index n = 0;
    for (std::size_t j = 0; j < params.pairs; ++j) {
        r(n++) = full(Eigen::Index(4 * j));
        r(n++) = full(Eigen::Index(4 * j + 1));
    }
    for (std::size_t t = 2 * params.pairs; t < params.k; ++t) r(n++) = full(Eigen::Index(2 * t));
    return r;
}

double fit_array_speed(std::span<const Vec2> p, std::span<const Vec2> q, double s) {
    // r(c) = r(0) - c g with g = +-1/K(s) on the e1 components.
    const Eigen::VectorXd r0 = balancing_residual(p, q, 0.0, s);
    const Eigen::VectorXd g = r0 - balancing_residual(p, q, 1.0, s);
    return r0.dot(g) / g.squaredNorm();
}

SymmetricArrayParams six_vortex_reference() {
    SymmetricArrayParams a{3, 1, {-1.026, 0.563, 0.368}, 0.0};
    const auto [p, q] = a.reconstruct();
    a.c = fit_array_speed(p, q, 0.5);
    return a;
}

// --- solvers ----------------------------------------------------------------------------------

void throw_newton_failure(const char* who, const NewtonResult& result) {
    throw ConvergenceError(std::string(who) + ": Newton " + to_string(result.status) + " after " +
                               std::to_string(result.iterations) + " iterations, residual " +
                               std::to_string(result.residual_norm),
                           result.residual_norm);
}

EquilibriumSolution solve_traveling(const VortexConfig& guess, double c_guess,
                                    std::span<const GaugeRow> gauge, const NewtonOptions& opt) {
    guess.validate();
    const Eigen::Index n = 2 * Eigen::Index(guess.size());
    Eigen::VectorXd x0(n + 1);
    x0.head(n) = flatten(guess.positions);
    x0(n) = c_guess;
    auto f = [&](const Eigen::VectorXd& x) {
        return traveling_residual(with_positions(guess, x.head(n)), x(n));
    };
    const NewtonResult res = solve_newton(f, x0, gauge, opt);
    if (!res.converged()) throw_newton_failure("solve_traveling", res);
    EquilibriumSolution sol;
    sol.config = with_positions(guess, res.x.head(n));
    sol.motion = {MotionKind::traveling, res.x(n)};
    sol.residual_norm = traveling_residual(sol.config, res.x(n)).lpNorm<Eigen::Infinity>();
    sol.iterations = res.iterations;
    return sol;
}

EquilibriumSolution solve_rotating(const VortexConfig& guess, double alpha_guess,
                                   std::span<const GaugeRow> gauge, const NewtonOptions& opt) {
    guess.validate();
    const Eigen::Index n = 2 * Eigen::Index(guess.size());
    Eigen::VectorXd x0(n + 1);
    x0.head(n) = flatten(guess.positions);
    x0(n) = alpha_guess;
    auto f = [&](const Eigen::VectorXd& x) {
        return rotating_residual(with_positions(guess, x.head(n)), x(n));
    };
    const NewtonResult res = solve_newton(f, x0, gauge, opt);
    if (!res.converged()) throw_newton_failure("solve_rotating", res);
    EquilibriumSolution sol;
    sol.config = with_positions(guess, res.x.head(n));
    sol.motion = {MotionKind::rotating, res.x(n)};
    sol.residual_norm = rotating_residual(sol.config, res.x(n)).lpNorm<Eigen::Infinity>();
    sol.iterations = res.iterations;
    return sol;
}

SymmetricArrayParams array_from_unknowns(const SymmetricArrayParams& shape,
                                         const Eigen::VectorXd& x) {
    SymmetricArrayParams a = shape;
    const Eigen::Index n = Eigen::Index(shape.free_count());
    if (x.size() != n + 1) throw DomainError("array_from_unknowns: size mismatch");
    a.coords.assign(x.data(), x.data() + n);
    a.c = x(n);
    return a;
}

namespace {

Eigen::VectorXd array_unknowns(const SymmetricArrayParams& a) {
    const Eigen::Index n = Eigen::Index(a.free_count());
    Eigen::VectorXd x(n + 1);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = a.coords[std::size_t(i)];
    x(n) = a.c;
    return x;
}

}  // namespace

ArraySolution solve_symmetric_array(const SymmetricArrayParams& guess, double s,
                                    std::size_t gauge_index, double gauge_value,
                                    const NewtonOptions& opt) {
    guess.validate();
    if (!(s > 0.0 && s < 1.0 + 1e-15)) throw DomainError("solve_symmetric_array: s outside (0, 1]");
    const Eigen::Index n = Eigen::Index(guess.free_count());
    if (Eigen::Index(gauge_index) >= n)
        throw DomainError("solve_symmetric_array: gauge index out of range");
    auto f = [&](const Eigen::VectorXd& x) {
        return symmetric_array_residual(array_from_unknowns(guess, x), s);
    };
    const std::vector<GaugeRow> gauge{
        pin_coordinate(n + 1, Eigen::Index(gauge_index), gauge_value, "scale")};
    const NewtonResult res = solve_newton(f, array_unknowns(guess), gauge, opt);
    if (!res.converged()) throw_newton_failure("solve_symmetric_array", res);

    ArraySolution out;
    out.params = array_from_unknowns(guess, res.x);
    const auto [p, q] = out.params.reconstruct();
    out.solution.config = out.params.to_config(s);
    out.solution.motion = {MotionKind::traveling, out.params.c};
    out.solution.residual_norm =
        balancing_residual(p, q, out.params.c, s).lpNorm<Eigen::Infinity>();
    out.solution.iterations = res.iterations;
    out.solution.certificate = jacobian_certificate(res.jacobian, "gauge_augmented_jacobian");
    out.reduced = symmetric_array_certificate(out.params, s);
    return out;
}

// --- certificates -----------------------------------------------------------------------------

Eigen::VectorXd translation_generator(std::size_t k, Vec2 direction) {
    Eigen::VectorXd v(2 * Eigen::Index(k));
    for (std::size_t j = 0; j < k; ++j) {
        v(2 * Eigen::Index(j)) = direction.x;
        v(2 * Eigen::Index(j) + 1) = direction.y;
    }
    return v;
}

Eigen::VectorXd rotation_generator(const VortexConfig& config) {
    std::vector<Vec2> t;
    for (const auto& b : config.positions) t.push_back(perp(b));
    return flatten(t);
}

namespace {

// Largest principal angle between span(kernel) and span(generators); pi/2 if dimensions differ.
double subspace_angle(const Eigen::MatrixXd& kernel, std::span<const Eigen::VectorXd> gens) {
    if (kernel.cols() != Eigen::Index(gens.size())) return kPi / 2.0;
    if (gens.empty()) return 0.0;
    Eigen::MatrixXd G(kernel.rows(), Eigen::Index(gens.size()));
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].size() != kernel.rows())
            throw DomainError("nondegeneracy_spectrum: generator length mismatch");
        G.col(Eigen::Index(i)) = gens[i];
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    const Eigen::MatrixXd Q =
        qr.householderQ() * Eigen::MatrixXd::Identity(G.rows(), G.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(kernel.transpose() * Q);
    const double smin = svd.singularValues().minCoeff();
    return std::acos(std::clamp(smin, -1.0, 1.0));
}

}  // namespace

Certificate nondegeneracy_spectrum(const EquilibriumSolution& solution,
                                   std::span<const Eigen::VectorXd> generators,
                                   double kernel_rel_tol) {
    const auto& cfg = solution.config;
    if (cfg.size() > 1 && cfg.min_separation() < 1e-12)
        throw SingularityError("nondegeneracy_spectrum: near-coincident points");
    Certificate cert;
    Eigen::MatrixXd H;
    if (solution.motion.kind == MotionKind::traveling) {
        cert.operator_name = "hessian_I";
        H = hessian_I(cfg, solution.motion.value);
    } else {
        cert.operator_name = "hessian_J";
        H = hessian_J(cfg, solution.motion.value);
    }
    const Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
    const Eigen::VectorXd& ev = es.eigenvalues();
    cert.spectrum.assign(ev.data(), ev.data() + ev.size());
    cert.kernel_tol = kernel_rel_tol * ev.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) < cert.kernel_tol) idx.push_back(i);
    cert.kernel_dimension = int(idx.size());
    Eigen::MatrixXd kernel(Hs.rows(), Eigen::Index(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        kernel.col(Eigen::Index(i)) = es.eigenvectors().col(idx[i]);
    cert.subspace_angle = subspace_angle(kernel, generators);
    cert.matches_symmetry = cert.kernel_dimension == int(generators.size()) &&
                            cert.subspace_angle < 1e-3;
    return cert;
}

Certificate jacobian_certificate(const Eigen::MatrixXd& J, std::string name,
                                 double kernel_rel_tol) {
    Certificate cert;
    cert.operator_name = std::move(name);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const Eigen::VectorXd& sv = svd.singularValues();
    cert.spectrum.assign(sv.data(), sv.data() + sv.size());
    cert.kernel_tol = sv.size() ? kernel_rel_tol * sv.maxCoeff() : 0.0;
    int kd = J.cols() > J.rows() ? int(J.cols() - J.rows()) : 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) < cert.kernel_tol) ++kd;
    cert.kernel_dimension = kd;
    cert.matches_symmetry = kd == 0;
    return cert;
}

Certificate symmetric_array_certificate(const SymmetricArrayParams& params, double s,
                                        double kernel_rel_tol) {
    params.validate();
    const Eigen::Index n = Eigen::Index(params.free_count());
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = params.coords[std::size_t(i)];
    auto f = [&](const Eigen::VectorXd& y) {
        SymmetricArrayParams a = params;
        a.coords.assign(y.data(), y.data() + n);
        return symmetric_array_residual(a, s);
    };
    return jacobian_certificate(fd_jacobian(f, x), "reduced_jacobian", kernel_rel_tol);
}

// --- continuation -----------------------------------------------------------------------------

Branch continue_in_s(const ContinuationProblem& problem, Eigen::VectorXd x0, double s0,
                     double s_target, int steps, const NewtonOptions& opt) {
    Branch branch;
    auto correct = [&](const Eigen::VectorXd& guess, double s) {
        auto f = [&](const Eigen::VectorXd& x) { return problem.residual(x, s); };
        return solve_newton(f, guess, problem.gauge, opt);
    };
    auto kernel_dim = [](const NewtonResult& r) {
        return jacobian_certificate(r.jacobian, "gauge_augmented_jacobian").kernel_dimension;
    };

    NewtonResult start = correct(x0, s0);
    if (!start.converged()) {
        branch.failed = true;
        branch.note = std::string("start point did not converge: ") + to_string(start.status);
        return branch;
    }
    const int kernel0 = kernel_dim(start);
    branch.points.push_back({s0, start.x, start.residual_norm, kernel0, start.iterations});
    if (steps <= 0 || s_target == s0) return branch;

    const double ds = (s_target - s0) / steps;
    double s = s0;
    Eigen::VectorXd x = start.x;
    for (int step = 1; step <= steps; ++step) {
        const double target = step == steps ? s_target : s0 + step * ds;
        double h = target - s;
        int halvings = 0;
        while (s != target) {
            const double trial = (std::abs(target - s) <= std::abs(h) * (1 + 1e-12)) ? target : s + h;
            NewtonResult r;
            bool ok = false;
            try {
                r = correct(x, trial);
                ok = r.converged();
            } catch (const Error&) {
                ok = false;
            }
            if (!ok) {
                if (halvings == 3) {
                    branch.failed = true;
                    branch.note = "no convergence after 3 step halvings near s=" + std::to_string(trial);
                    return branch;
                }
                h *= 0.5;
                ++halvings;
                continue;
            }
            const int kd = kernel_dim(r);
            if (kd > kernel0) {
                branch.bifurcation = true;
                branch.note = "kernel dimension grew to " + std::to_string(kd) + " at s=" +
                              std::to_string(trial);
                return branch;
            }
            s = trial;
            x = r.x;
            branch.points.push_back({s, x, r.residual_norm, kd, r.iterations});
        }
    }
    return branch;
}

Branch continue_symmetric_array(const SymmetricArrayParams& start, double s0, double s_target,
                                int steps, std::size_t gauge_index, double gauge_value,
                                const NewtonOptions& opt) {
    start.validate();
    const Eigen::Index n = Eigen::Index(start.free_count());
    if (Eigen::Index(gauge_index) >= n)
        throw DomainError("continue_symmetric_array: gauge index out of range");
    ContinuationProblem problem;
    problem.residual = [start](const Eigen::VectorXd& x, double s) {
        return symmetric_array_residual(array_from_unknowns(start, x), s);
    };
    problem.gauge.push_back(pin_coordinate(n + 1, Eigen::Index(gauge_index), gauge_value, "scale"));
    Eigen::VectorXd x0(n + 1);
    for (Eigen::Index i = 0; i < n; ++i) x0(i) = start.coords[std::size_t(i)];
    x0(n) = start.c;
    return continue_in_s(problem, x0, s0, s_target, steps, opt);
}

}  // namespace sqg

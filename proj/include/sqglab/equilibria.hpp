#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sqglab/newton.hpp"
#include "sqglab/point_vortex.hpp"

namespace sqg {

enum class MotionKind { traveling, rotating };

/// Speed c along e2 (traveling) or angular velocity alpha (rotating).
struct RigidMotion {
    MotionKind kind = MotionKind::traveling;
    double value = 0.0;
};

/// Spectrum-based nondegeneracy certificate.
struct Certificate {
    std::string operator_name;
    /// Eigenvalues (ascending) for symmetric operators, singular values (descending) otherwise.
    std::vector<double> spectrum;
    int kernel_dimension = 0;
    double kernel_tol = 0.0;
    /// Largest principal angle between the numerical kernel and the symmetry generators.
    double subspace_angle = 0.0;
    bool matches_symmetry = true;
};

struct EquilibriumSolution {
    VortexConfig config;
    RigidMotion motion;
    double residual_norm = 0.0;
    int iterations = 0;
    std::optional<Certificate> certificate;
};

// --- residuals and closed forms -------------------------------------------------------------

/// Block j: c e2 - K(s) sum_{i != j} m_i (b_i - b_j)^perp / |b_i - b_j|^{4-2s}.
Eigen::VectorXd traveling_residual(const VortexConfig& config, double c);

/// Block j: alpha b_j + K(s) sum_{i != j} m_i (b_i - b_j) / |b_i - b_j|^{4-2s}.
Eigen::VectorXd rotating_residual(const VortexConfig& config, double alpha);

/// b1 = d e1, b2 = -d e1, intensities (m, -m), c = -Gamma(2-s) m / (4 pi Gamma(s) d^{3-2s}).
EquilibriumSolution vortex_pair(double d, double m, double s);

/// Regular k-gon of radius rho with equal intensities m.
EquilibriumSolution rotating_polygon(int k, double rho, double m, double s);

/// Closed-form angular velocity of the regular k-gon, m rho^{2s-4} Gamma(2-s)/(2^{s+1} pi Gamma(s))
/// sum_l (1 - cos(2 pi l/k))^{-(1-s)}.
double polygon_angular_velocity(int k, double rho, double m, double s);

// --- energies -------------------------------------------------------------------------------

/// I = c sum m_i b_i.e1 + Gamma(1-s)/(2^{2s} pi Gamma(s)) sum_{i<j} m_i m_j |b_i - b_j|^{2s-2}
double energy_I(const VortexConfig& config, double c);
Eigen::VectorXd grad_I(const VortexConfig& config, double c);

/// J = (alpha/2) sum m_i |b_i|^2 + the same pair term.
double energy_J(const VortexConfig& config, double alpha);
Eigen::VectorXd grad_J(const VortexConfig& config, double alpha);

/// Central-difference Hessians of the analytic gradients (not symmetrized).
Eigen::MatrixXd hessian_I(const VortexConfig& config, double c, double rel_step = 1e-6);
Eigen::MatrixXd hessian_J(const VortexConfig& config, double alpha, double rel_step = 1e-6);

/// Flattened positions (x_1, y_1, ..., x_k, y_k) and back.
Eigen::VectorXd flatten(std::span<const Vec2> points);
std::vector<Vec2> unflatten(const Eigen::VectorXd& v, Eigen::Index count, Eigen::Index offset = 0);

// --- symmetric traveling arrays -------------------------------------------------------------

/// Positive vortices p_1..p_k (intensity +1) mirrored into negative ones q_i = -conj(p_i).
/// The first `pairs` conjugate pairs p_{2j-1} = conj(p_{2j}) carry two free coordinates
/// (x, y of p_{2j-1}); the remaining k - 2 pairs vortices sit on the real axis with one (x).
struct SymmetricArrayParams {
    std::size_t k = 1;
    std::size_t pairs = 0;
    std::vector<double> coords;
    double c = 0.0;

    std::size_t free_count() const { return k; }
    void validate() const;
    /// (p, q) point sets.
    std::pair<std::vector<Vec2>, std::vector<Vec2>> reconstruct() const;
    /// Full configuration: p with intensity +1, then q with intensity -1.
    VortexConfig to_config(double s) const;
};

/// Both blocks of the balancing system (2k planar equations, p-block first):
///   sum_{j!=i} (p_i-p_j)/|.|^{4-2s} - sum_l (p_i-q_l)/|.|^{4-2s} - c 2^{2s-1} pi Gamma(s)/Gamma(2-s) e1
///   sum_{l!=m} (q_m-q_l)/|.|^{4-2s} - sum_j (q_m-p_j)/|.|^{4-2s} + c 2^{2s-1} pi Gamma(s)/Gamma(2-s) e1
Eigen::VectorXd balancing_residual(std::span<const Vec2> p, std::span<const Vec2> q, double c,
                                   double s);

/// The balancing equations projected onto the free coordinates: both components for the first
/// member of each conjugate pair, the e1 component for each real-axis vortex.
Eigen::VectorXd symmetric_array_residual(const SymmetricArrayParams& params, double s);

/// Least-squares speed c for fixed points (the balancing residual is affine in c).
double fit_array_speed(std::span<const Vec2> p, std::span<const Vec2> q, double s);

/// Coordinates (-1.026, 0.563), (-1.026, -0.563), (0.368, 0) of the six-vortex SQG array, with the
/// least-squares speed at s = 1/2.
SymmetricArrayParams six_vortex_reference();

// --- solvers --------------------------------------------------------------------------------

/// Unknowns (b_1..b_k, c).  Gauge rows act on that vector of length 2k+1.
EquilibriumSolution solve_traveling(const VortexConfig& guess, double c_guess,
                                    std::span<const GaugeRow> gauge,
                                    const NewtonOptions& options = {});

/// Unknowns (b_1..b_k, alpha).
EquilibriumSolution solve_rotating(const VortexConfig& guess, double alpha_guess,
                                   std::span<const GaugeRow> gauge,
                                   const NewtonOptions& options = {});

struct ArraySolution {
    SymmetricArrayParams params;
    EquilibriumSolution solution;  ///< certificate: gauge-augmented Jacobian
    Certificate reduced;           ///< Jacobian in the free coordinates at fixed c
};

/// Unknowns (free coords, c) with c free and one free coordinate pinned (scale gauge).
ArraySolution solve_symmetric_array(const SymmetricArrayParams& guess, double s,
                                    std::size_t gauge_index, double gauge_value,
                                    const NewtonOptions& options = {});

/// Newton-failure exception carrying the solver status.
[[noreturn]] void throw_newton_failure(const char* who, const NewtonResult& result);

// --- certificates ---------------------------------------------------------------------------

/// Tangent vector of a rigid translation along `direction`.
Eigen::VectorXd translation_generator(std::size_t k, Vec2 direction);
/// Tangent vector of a rotation about the origin, b_j -> b_j^perp.
Eigen::VectorXd rotation_generator(const VortexConfig& config);

/// Hessian spectrum of I (traveling) or J (rotating) at a converged solution.
/// kernel_tol defaults to 1e-6 times the largest |eigenvalue|.
Certificate nondegeneracy_spectrum(const EquilibriumSolution& solution,
                                   std::span<const Eigen::VectorXd> symmetry_generators,
                                   double kernel_rel_tol = 1e-6);

/// Singular-value certificate of a (possibly rectangular) Jacobian.
Certificate jacobian_certificate(const Eigen::MatrixXd& jacobian, std::string name,
                                 double kernel_rel_tol = 1e-6);

/// Reduced Jacobian (free coordinates, c fixed) of a symmetric array.
Certificate symmetric_array_certificate(const SymmetricArrayParams& params, double s,
                                        double kernel_rel_tol = 1e-6);

// --- continuation in s ----------------------------------------------------------------------

struct ContinuationProblem {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> residual;
    std::vector<GaugeRow> gauge;
};

struct BranchPoint {
    double s = 0.0;
    Eigen::VectorXd x;
    double residual_norm = 0.0;
    int kernel_dimension = 0;
    int iterations = 0;
};

struct Branch {
    std::vector<BranchPoint> points;  ///< starts with the corrected initial point
    bool bifurcation = false;
    bool failed = false;
    std::string note;
};

/// Natural-parameter continuation from s0 to s_target in `steps` equal increments, each corrected
/// by Newton; a failed increment is retried with halved steps (at most 3 halvings).  The branch is
/// truncated when the kernel of the gauge-augmented Jacobian grows (bifurcation flag).
Branch continue_in_s(const ContinuationProblem& problem, Eigen::VectorXd x0, double s0,
                     double s_target, int steps, const NewtonOptions& options = {});

/// Continuation of a symmetric array with c free and the coordinate gauge held fixed.
Branch continue_symmetric_array(const SymmetricArrayParams& start, double s0, double s_target,
                                int steps, std::size_t gauge_index, double gauge_value,
                                const NewtonOptions& options = {});

/// Rebuilds array parameters from a continuation unknown vector (free coords, c).
SymmetricArrayParams array_from_unknowns(const SymmetricArrayParams& shape, const Eigen::VectorXd& x);

}  // namespace sqg

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sqg {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Linear normalization row  coeffs . x = target  appended to a residual (gauge fixing).
struct GaugeRow {
    Eigen::VectorXd coeffs;
    double target = 0.0;
    std::string label;
};

/// Row pinning unknown `index` to `value`.
GaugeRow pin_coordinate(Eigen::Index n, Eigen::Index index, double value, std::string label = {});

struct NewtonOptions {
    double tol = 1e-10;  ///< sup-norm of residual and gauge rows
    int max_iter = 100;
    double fd_rel_step = 1e-6;  ///< central-difference step relative to max(1, |x_i|)
    int max_halvings = 30;
    double rank_tol = 1e-10;  ///< relative pivot threshold of the rank test
};

enum class NewtonStatus { converged, max_iterations, rank_deficient, stalled };

const char* to_string(NewtonStatus status);

struct NewtonResult {
    Eigen::VectorXd x;
    NewtonStatus status = NewtonStatus::max_iterations;
    double residual_norm = 0.0;
    int iterations = 0;
    /// Gauge-augmented Jacobian at the returned point.
    Eigen::MatrixXd jacobian;

    bool converged() const { return status == NewtonStatus::converged; }
};

/// Central finite-difference Jacobian.
Eigen::MatrixXd fd_jacobian(const ResidualFn& f, const Eigen::VectorXd& x, double rel_step = 1e-6);

/// Damped (Gauss-)Newton on [f(x); gauge rows].  The augmented system may be overdetermined when
/// the residual carries identities (conservation laws); steps come from a column-pivoted QR.
NewtonResult solve_newton(const ResidualFn& f, Eigen::VectorXd x0, std::span<const GaugeRow> gauge,
                          const NewtonOptions& options = {});

}  // namespace sqg

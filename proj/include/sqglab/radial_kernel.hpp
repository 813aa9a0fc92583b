#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sqg {

/// Mode-m radial Riesz kernel in the plane,
///   K_m(r, rho) = c_{2,s} rho int_0^{2 pi} cos(m theta) (r^2 + rho^2 - 2 r rho cos theta)^{-(1-s)} dtheta,
/// so that the Riesz potential of f(rho) cos(m phi) is [int K_m(r, rho) f(rho) drho] cos(m phi).
///
/// Far from the diagonal the Laplace-coefficient series is summed; otherwise the angular integral
/// is split into geometrically graded panels at theta = 0.  On the diagonal r = rho the value is
/// finite only for s > 1/2 and is computed by subtracting the theta^{-2(1-s)} singularity; for
/// s <= 1/2 a SingularityError is thrown.
double radial_mode_kernel(double r, double rho, double s, int m);

/// Same kernel by the hypergeometric series
///   2 pi (a)_m / m! t^m 2F1(a, a+m; m+1; t^2),  t = min(r, rho)/max(r, rho),  a = 1 - s,
/// valid for t < 1.  Exposed as an independent oracle.
double radial_mode_kernel_series(double r, double rho, double s, int m);

/// Same kernel by brute-force composite Gauss-Legendre quadrature on [0, pi] with `panels`
/// uniform panels (for testing away from the diagonal).
double radial_mode_kernel_bruteforce(double r, double rho, double s, int m, int panels = 400);

/// Source interpolation inside each cell: hat functions, or the cubic through the four nearest
/// nodes of the source support (one-sided at its ends).
enum class Interpolation { linear, cubic };

/// Nodal basis values of the interpolant at rho in cell [nodes[cell], nodes[cell + 1]].
struct Stencil {
    std::size_t first = 0;
    std::size_t count = 0;
    double basis[4] = {0.0, 0.0, 0.0, 0.0};
};
Stencil interpolation_stencil(std::span<const double> nodes, std::size_t columns,
                              Interpolation order, std::size_t cell, double rho);

/// Product-integration weights
///   W(i, j) = int K_m(x_i, rho) phi_j(rho) drho,
/// phi_j the nodal basis of the interpolant on nodes[0..columns-1]; the source is taken as zero
/// beyond nodes[columns - 1].  Rows are assembled in parallel.
Eigen::MatrixXd product_integration_matrix(std::span<const double> x, std::span<const double> nodes,
                                           std::size_t columns, double s, int m, int threads = 0,
                                           Interpolation order = Interpolation::cubic);

/// Mode-m potential at r of the interpolant of `values` on `nodes`.
double mode_potential(double r, std::span<const double> nodes, std::span<const double> values,
                      double s, int m, Interpolation order = Interpolation::cubic);

/// int rho phi_j(rho) drho for each nodal basis function.
std::vector<double> radial_hat_moments(std::span<const double> nodes,
                                       Interpolation order = Interpolation::cubic);

}  // namespace sqg

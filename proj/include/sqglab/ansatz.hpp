#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sqglab/plasma.hpp"
#include "sqglab/point_vortex.hpp"

namespace sqg {

/// mu_j = (|m_j| / Mgamma)^{1 / (2 (1 - s gamma/(gamma-1)))}.
double mu_from_mass(double m, const FracParams& params, double Mgamma);

/// Desingularized vortex configuration: point b_j, scale eps mu_j, threshold lambda_j, sign
/// sigma_j = sign(m_j), drift c along e2 and cutoff radius delta.
struct AnsatzParams {
    VortexConfig config;
    double eps = 0.0;
    std::vector<double> mu;
    std::vector<double> lambda;
    double c = 0.0;
    double delta = 0.0;
    std::shared_ptr<const RadialProfile> profile;

    double sigma(std::size_t j) const { return config.intensities[j] > 0.0 ? 1.0 : -1.0; }
    /// a = 2s / (gamma - 1).
    double exponent() const;
    /// Disjoint balls B_delta(b_j), 0 < eps < delta, positive mu and lambda, matching sizes.
    void validate() const;
};

/// mu_j from the intensities and lambda_j from lambda_solve; config.s must equal the profile's s.
AnsatzParams make_ansatz(const VortexConfig& config, double eps, double c, double delta,
                         std::shared_ptr<const RadialProfile> profile);

/// Pair b_1 = d e1, b_2 = -d e1 with intensities (m, -m).
AnsatzParams pair_ansatz(double d, double m, double c, double eps, double delta,
                         std::shared_ptr<const RadialProfile> profile);

/// mu_l^a lambda_l = 1 + sigma_l [ sum_{j != l} sigma_j mu_l^a mu_j^{-a} W((b_l - b_j)/(eps mu_j))
///                                + c mu_l^a eps^{2-2s} b_{l,1} ].
/// Throws ConfigError if some lambda_l <= 0.
std::vector<double> lambda_solve(const AnsatzParams& params);

/// psi_0(x) = eps^{2s-2} sum_j sigma_j mu_j^{-a} W((x - b_j)/(eps mu_j)).
double build_psi0(Vec2 x, const AnsatzParams& params);

/// Mismatch of the nonlinearity near vortex l in the rescaled variable z = (x - b_l)/(eps mu_l):
///   E(z) = (W(z) - 1)_+^gamma - (W(z) - 1 + S(z))_+^gamma,
///   S(z) = sigma_l [ sum_{j != l} sigma_j mu_l^a mu_j^{-a} (W((x - b_j)/(eps mu_j))
///                                  - W((b_l - b_j)/(eps mu_j))) + c mu_l^{a+1} eps^{3-2s} z_1 ].
struct ErrorField {
    std::size_t vortex = 0;
    double radius = 0.0;          ///< grid half-width in z (3 R0 by default)
    std::vector<Vec2> points;     ///< grid points inside the disc |z| <= radius
    std::vector<double> values;
    double sup_error = 0.0;
    /// beta of the least-squares fit E ~ -beta gamma (W(z)-1)_+^{gamma-1} z_1 (first-order part).
    double linear_coeff = 0.0;
};

/// n x n uniform grid on [-radius_factor R0, radius_factor R0]^2 masked to the disc.
/// Throws DomainError if the disc is not inside B_{delta/(eps mu_l)}.
ErrorField error_field(const AnsatzParams& params, std::size_t vortex = 0, int n = 201,
                       double radius_factor = 3.0, int threads = 0);

void write_error_field_csv(std::ostream& out, const ErrorField& field);

struct ErrorScalingReport {
    double s = 0.0;
    double gamma = 0.0;
    double d = 0.0;  ///< half-separation of the first two vortices
    std::vector<double> eps;
    std::vector<double> sup_error;
    double slope = 0.0;
    double predicted = 0.0;  ///< 3 - 2s
};

/// Least-squares slope of log(sup error) against log(eps); mu and lambda are recomputed for every
/// eps from the template.  At least four distinct eps values are required.
ErrorScalingReport scaling_study(std::span<const double> eps, const AnsatzParams& tmpl,
                                 int threads = 0);

/// Least-squares slope of log y against log x; throws DomainError when degenerate.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// 1/d^{3-2s} + c1, c1 = (c/m) 4 pi Gamma(s)/Gamma(2-s).
double reduced_function(double d, double c, double m, double s);

struct ReducedRoot {
    double c1 = 0.0;
    bool has_root = false;
    double d_star = 0.0;  ///< |c1|^{-1/(3-2s)} when c1 < 0
};
ReducedRoot reduced_root(double c, double m, double s);

/// Both blocks of the balancing system for p (intensity +1) and q (intensity -1).
Eigen::VectorXd balancing_residual_multi(std::span<const Vec2> p, std::span<const Vec2> q, double c,
                                         double s);

}  // namespace sqg

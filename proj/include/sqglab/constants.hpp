#pragma once

#include "sqglab/vec2.hpp"

namespace sqg {

/// Dimension, fractional order and nonlinearity exponent of the plasma problem.
struct FracParams {
    int n = 2;
    double s = 0.5;
    double gamma = 2.0;

    /// Checks 0 < s < 1 only.
    void validate_order() const;
    /// Full check for plasma/ansatz use: 1 < gamma < (n+2s)/(n-2s), gamma != 1/(1-s) (n = 2).
    void validate_plasma() const;
    /// Upper end of the admissible gamma range, (n+2s)/(n-2s).
    double gamma_critical() const;
};

/// Euler Gamma for x > 0.
double gamma_fn(double x);

/// c_{n,s} of the Riesz kernel G_s(z) = c_{n,s} |z|^{-(n-2s)}; requires 0 < s < min(1, n/2).
double riesz_constant(int n, double s);

/// K(s) = Gamma(2-s) / (2^{2s-1} pi Gamma(s)), 0 < s <= 1.  K(1) = 1/(2 pi).
double interaction_constant(double s);

/// Gamma(1-s) / (2^{2s} pi Gamma(s)): pair-energy coefficient whose gradient generates the
/// point-vortex velocity law.  Equals K(s) / (2 - 2s).
double hamiltonian_constant(double s);

/// grad^perp G_s(z) in the plane, computed as c_{2,s} (2s-2) |z|^{2s-4} z^perp.
Vec2 riesz_point_gradient_perp(double s, Vec2 z);

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace sqg

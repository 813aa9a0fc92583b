#include "sqglab/constants.hpp"

#include <cmath>
#include <string>

#include "sqglab/error.hpp"

namespace sqg {

namespace {

void require_order(double s, double hi, const char* who) {
    if (!(s > 0.0 && s < hi))
        throw DomainError(std::string(who) + ": fractional order s=" + std::to_string(s) +
                          " outside (0, " + std::to_string(hi) + ")");
}

}  // namespace

void FracParams::validate_order() const {
    if (n < 2) throw DomainError("FracParams: dimension n must be >= 2");
    require_order(s, 1.0, "FracParams");
}

double FracParams::gamma_critical() const { return (n + 2.0 * s) / (n - 2.0 * s); }

void FracParams::validate_plasma() const {
    validate_order();
    if (!(gamma > 1.0 && gamma < gamma_critical()))
        throw DomainError("FracParams: gamma=" + std::to_string(gamma) + " outside (1, " +
                          std::to_string(gamma_critical()) + ")");
    if (n == 2 && std::abs(gamma - 1.0 / (1.0 - s)) < 1e-12)
        throw DomainError("FracParams: gamma = 1/(1-s) makes the mass exponent degenerate");
}

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("gamma_fn: argument must be positive and finite, got " + std::to_string(x));
    return std::tgamma(x);
}

double riesz_constant(int n, double s) {
    if (n < 1) throw DomainError("riesz_constant: dimension must be positive");
    require_order(s, std::min(1.0, n / 2.0), "riesz_constant");
    return std::pow(kPi, -n / 2.0) * std::pow(2.0, -2.0 * s) * gamma_fn((n - 2.0 * s) / 2.0) /
           gamma_fn(s);
}

double interaction_constant(double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw DomainError("interaction_constant: s=" + std::to_string(s) + " outside (0, 1]");
    return gamma_fn(2.0 - s) / (std::pow(2.0, 2.0 * s - 1.0) * kPi * gamma_fn(s));
}

double hamiltonian_constant(double s) {
    require_order(s, 1.0, "hamiltonian_constant");
    return gamma_fn(1.0 - s) / (std::pow(2.0, 2.0 * s) * kPi * gamma_fn(s));
}

Vec2 riesz_point_gradient_perp(double s, Vec2 z) {
    const double r2 = norm2(z);
    if (r2 == 0.0) throw SingularityError("riesz_point_gradient_perp: zero displacement");
    const double c = riesz_constant(2, s);
    return c * (2.0 * s - 2.0) * std::pow(r2, s - 2.0) * perp(z);
}

}  // namespace sqg

#include <doctest.h>

#include <cmath>

#include "sqglab/constants.hpp"
#include "sqglab/error.hpp"

using namespace sqg;
using doctest::Approx;

TEST_CASE("gamma function at reference points") {
    CHECK(gamma_fn(1.0) == Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(gamma_fn(1.5) == Approx(0.5 * std::sqrt(kPi)).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == Approx(24.0).epsilon(1e-13));
    for (double x : {0.1, 0.37, 1.9, 3.3}) CHECK(gamma_fn(x) == Approx(std::tgamma(x)).epsilon(1e-13));
}

TEST_CASE("gamma function rejects non-positive input") {
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-1.5), DomainError);
}

TEST_CASE("riesz constant") {
    CHECK(riesz_constant(2, 0.5) == Approx(1.0 / (2.0 * kPi)).epsilon(1e-13));
    CHECK(riesz_constant(2, 0.25) == Approx(0.076075).epsilon(1e-5));
    CHECK(riesz_constant(3, 0.5) == Approx(1.0 / (2.0 * kPi * kPi)).epsilon(1e-13));
    CHECK_THROWS_AS(riesz_constant(2, 1.0), DomainError);
    CHECK_THROWS_AS(riesz_constant(2, 0.0), DomainError);
    CHECK_THROWS_AS(riesz_constant(1, 0.6), DomainError);
}

TEST_CASE("interaction constant") {
    CHECK(interaction_constant(1.0) == Approx(1.0 / (2.0 * kPi)).epsilon(1e-13));
    CHECK(interaction_constant(0.5) == Approx(1.0 / (2.0 * kPi)).epsilon(1e-13));
    CHECK(interaction_constant(0.75) == Approx(0.166483).epsilon(1e-5));
    CHECK(std::abs(interaction_constant(0.999) - 1.0 / (2.0 * kPi)) < 1e-3);
    CHECK_THROWS_AS(interaction_constant(1.2), DomainError);
    CHECK_THROWS_AS(interaction_constant(0.0), DomainError);
}

TEST_CASE("hamiltonian constant is K/(2-2s)") {
    for (double s : {0.1, 0.3, 0.5, 0.75, 0.95})
        CHECK(hamiltonian_constant(s) == Approx(interaction_constant(s) / (2.0 - 2.0 * s)).epsilon(1e-13));
}

TEST_CASE("point gradient matches finite differences of the Riesz kernel") {
    const double s = 0.35;
    const double c = riesz_constant(2, s);
    auto G = [&](Vec2 z) { return c * std::pow(std::hypot(z.x, z.y), 2.0 * s - 2.0); };
    const Vec2 z{0.7, -0.4};
    const double h = 1e-6;
    const double gx = (G({z.x + h, z.y}) - G({z.x - h, z.y})) / (2 * h);
    const double gy = (G({z.x, z.y + h}) - G({z.x, z.y - h})) / (2 * h);
    const Vec2 gp = riesz_point_gradient_perp(s, z);
    CHECK(gp.x == Approx(gy).epsilon(1e-7));
    CHECK(gp.y == Approx(-gx).epsilon(1e-7));
    CHECK_THROWS_AS(riesz_point_gradient_perp(s, {0.0, 0.0}), SingularityError);
}

TEST_CASE("plasma parameter admissibility") {
    CHECK_NOTHROW((FracParams{2, 0.5, 2.5}.validate_plasma()));
    CHECK_THROWS_AS((FracParams{2, 0.5, 2.0}.validate_plasma()), DomainError);
    CHECK_THROWS_AS((FracParams{2, 0.5, 3.5}.validate_plasma()), DomainError);
    CHECK_THROWS_AS((FracParams{2, 0.5, 1.0}.validate_plasma()), DomainError);
    CHECK(FracParams{2, 0.5, 2.5}.gamma_critical() == Approx(3.0));
}

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sqglab/constants.hpp"
#include "sqglab/error.hpp"
#include "sqglab/plasma.hpp"

using namespace sqg;
using doctest::Approx;

namespace {
const RadialProfile& reference() {
    static const RadialProfile p = solve_ground_state({2, 0.5, 2.5});
    return p;
}
}  // namespace

TEST_CASE("normalized grid layout") {
    const auto x = normalized_grid(40, 40.0);
    REQUIRE(x.size() == 41);
    CHECK(x.front() == 0.0);
    CHECK(x[20] == 1.0);
    CHECK(x.back() == Approx(40.0).epsilon(1e-12));
    for (std::size_t i = 1; i < x.size(); ++i) CHECK(x[i] > x[i - 1]);
    CHECK((x[21] - x[20]) == Approx(x[20] - x[19]).epsilon(1e-9));
}

TEST_CASE("grid specification checks") {
    CHECK_THROWS_AS((GridSpec{7}.validate()), DomainError);
    CHECK_THROWS_AS((GridSpec{401}.validate()), DomainError);
    CHECK_THROWS_AS((GridSpec{400, 1.0}.validate()), DomainError);
}

TEST_CASE("ground state satisfies the discrete equation") {
    const RadialProfile& p = reference();
    CHECK(p.residual_norm < 1e-9);
    CHECK(discrete_residual(p) < 1e-9);
    CHECK(p.nodes[p.boundary_index] == Approx(p.R0).epsilon(1e-14));
    CHECK(p.values[p.boundary_index] == Approx(1.0).epsilon(1e-12));
    CHECK(evaluate_W(p, p.R0) == Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < p.values.size(); ++i) CHECK(p.values[i] < p.values[i - 1]);
    for (std::size_t i = p.boundary_index; i < p.source.size(); ++i) CHECK(p.source[i] == 0.0);
    CHECK(p.W0() == Approx(13.085).epsilon(1e-3));
    CHECK(p.R0 == Approx(0.2664).epsilon(1e-3));
}

TEST_CASE("far field follows the point-mass potential") {
    const RadialProfile& p = reference();
    const std::vector<double> f{10.0, 50.0};
    const PlasmaDiagnostics d = diagnostics(p, f);
    REQUIRE(d.tail.size() == 2);
    CHECK(std::abs(d.tail[1].ratio - 1.0) < 0.02);
    CHECK(std::abs(d.tail[1].derivative_ratio - 1.0) < 0.05);
    CHECK(std::abs(d.tail[1].ratio - 1.0) < std::abs(d.tail[0].ratio - 1.0) + 1e-12);
    CHECK(d.R0 == Approx(p.R0).epsilon(1e-10));
    CHECK(p.tail_coeff == Approx(p.Mgamma * riesz_constant(2, 0.5)).epsilon(0.02));
    const std::vector<double> bad{-1.0};
    CHECK_THROWS_AS(diagnostics(p, bad), DomainError);
}

TEST_CASE("interpolant and potential agree at the nodes") {
    const RadialProfile& p = reference();
    for (std::size_t i : {std::size_t(0), p.boundary_index / 2, p.boundary_index + 7})
        CHECK(potential_at(p, p.nodes[i]) == Approx(p.values[i]).epsilon(1e-9));
    CHECK(evaluate_W(p, p.R_max() * (1 - 1e-12)) == Approx(evaluate_W(p, p.R_max() * (1 + 1e-12))).epsilon(1e-9));
    CHECK(evaluate_W(p, 3.0 * p.R_max()) < evaluate_W(p, p.R_max()));
    CHECK_THROWS_AS(evaluate_W(p, -0.1), DomainError);
    CHECK_THROWS_AS(evaluate_dW(p, -0.1), DomainError);
}

TEST_CASE("profile derivative") {
    const RadialProfile& p = reference();
    const auto d = profile_derivative(p);
    CHECK(d.front() == 0.0);
    const std::size_t i = p.boundary_index;
    CHECK(d[i] == Approx(evaluate_dW(p, p.nodes[i])).epsilon(1e-3));
    const double h = 1e-4 * p.R0;
    const double fd = (potential_at(p, p.R0 + h) - potential_at(p, p.R0 - h)) / (2 * h);
    CHECK(d[i] == Approx(fd).epsilon(1e-3));
}

TEST_CASE("dilated profile solves the shifted equation") {
    const RadialProfile& p = reference();
    CHECK(dilation_residual(p, 2.0) < 1e-8);
    CHECK(dilation_residual(p, 1.3) < 1e-8);
    CHECK(dilation_residual(p, 0.8) < 1e-8);
    CHECK_THROWS_AS(dilation_residual(p, 0.0), DomainError);
}

TEST_CASE("profile csv") {
    std::ostringstream out;
    write_profile_csv(out, reference());
    const std::string text = out.str();
    CHECK(text.rfind("r,W,source\n", 0) == 0);
}

TEST_CASE("other admissible parameters") {
    GridSpec g;
    g.N = 200;
    const RadialProfile p = solve_ground_state({2, 0.75, 2.0}, g);
    CHECK(p.residual_norm < 1e-9);
    CHECK(p.W0() > 1.0);
    CHECK(p.Mgamma > 0.0);
}

TEST_CASE("inadmissible parameters") {
    CHECK_THROWS_AS(solve_ground_state({2, 0.5, 3.5}), DomainError);
    CHECK_THROWS_AS(solve_ground_state({2, 0.5, 2.0}), DomainError);
    CHECK_THROWS_AS(solve_ground_state({3, 0.5, 2.5}), DomainError);
}

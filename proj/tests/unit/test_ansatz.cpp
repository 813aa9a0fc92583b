#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "sqglab/ansatz.hpp"
#include "sqglab/constants.hpp"
#include "sqglab/equilibria.hpp"
#include "sqglab/error.hpp"
#include "sqglab/plasma.hpp"

using namespace sqg;
using doctest::Approx;

namespace {
std::shared_ptr<const RadialProfile> profile(double s, double gamma) {
    GridSpec g;
    g.N = 200;
    return std::make_shared<const RadialProfile>(solve_ground_state({2, s, gamma}, g));
}
const std::shared_ptr<const RadialProfile>& half() {
    static const auto p = profile(0.5, 2.5);
    return p;
}
double pair_speed(double s) { return vortex_pair(1.0, 1.0, s).motion.value; }
}  // namespace

TEST_CASE("mu from mass") {
    CHECK(mu_from_mass(3.0, {2, 0.5, 2.5}, 3.0) == Approx(1.0).epsilon(1e-15));
    CHECK(mu_from_mass(2.0, {2, 0.4, 2.0}, 1.0) == Approx(5.656854).epsilon(1e-6));
    CHECK(mu_from_mass(-2.0, {2, 0.4, 2.0}, 1.0) == Approx(5.656854).epsilon(1e-6));
    CHECK_THROWS_AS(mu_from_mass(1.0, {2, 0.5, 2.0}, 1.0), DomainError);
    CHECK_THROWS_AS(mu_from_mass(0.0, {2, 0.5, 2.5}, 1.0), DomainError);
}

TEST_CASE("lambda tends to mu^-a as eps vanishes") {
    const auto p = half();
    const double a = 2.0 * 0.5 / 1.5;
    auto dev = [&](double eps) {
        const AnsatzParams A = pair_ansatz(0.8, 1.0, pair_speed(0.5), eps, 0.4, p);
        double worst = 0.0;
        for (std::size_t l = 0; l < 2; ++l)
            worst = std::max(worst, std::abs(A.lambda[l] * std::pow(A.mu[l], a) - 1.0));
        return worst;
    };
    const double d1 = dev(1e-3), d2 = dev(1e-4);
    CHECK(d2 < 1e-3);
    CHECK(d1 / d2 == Approx(10.0).epsilon(0.05));
}

TEST_CASE("lambda solve matches its defining relation") {
    const auto p = half();
    const AnsatzParams A = pair_ansatz(0.8, 1.0, pair_speed(0.5), 1e-2, 0.4, p);
    const double a = A.exponent();
    const double mu = A.mu[0];
    const double W12 = evaluate_W(*p, 1.6 / (A.eps * mu));
    const double rhs0 = 1.0 + (-1.0 * std::pow(mu, a) * std::pow(mu, -a) * W12 +
                               A.c * std::pow(mu, a) * std::pow(A.eps, 1.0) * 0.8);
    CHECK(std::pow(mu, a) * A.lambda[0] == Approx(rhs0).epsilon(1e-12));
}

TEST_CASE("psi0 is a sum of scaled profiles") {
    const auto p = half();
    const AnsatzParams A = pair_ansatz(0.8, 1.0, pair_speed(0.5), 1e-2, 0.4, p);
    const Vec2 x{0.81, 0.003};
    const double a = A.exponent();
    double expect = 0.0;
    const Vec2 b[2] = {{0.8, 0.0}, {-0.8, 0.0}};
    for (int j = 0; j < 2; ++j) {
        const double r = std::hypot(x.x - b[j].x, x.y - b[j].y) / (A.eps * A.mu[j]);
        expect += A.sigma(j) * std::pow(A.mu[j], -a) * evaluate_W(*p, r);
    }
    expect *= std::pow(A.eps, 2.0 * 0.5 - 2.0);
    CHECK(build_psi0(x, A) == Approx(expect).epsilon(1e-13));
}

TEST_CASE("ansatz validation") {
    const auto p = half();
    CHECK_THROWS_AS(pair_ansatz(0.8, 1.0, 0.0, 1e-2, 0.9, p), DomainError);
    CHECK_THROWS_AS(pair_ansatz(0.0, 1.0, 0.0, 1e-2, 0.4, p), DomainError);
    CHECK_THROWS_AS(pair_ansatz(0.8, 1.0, 0.0, 0.5, 0.4, p), DomainError);
    CHECK_THROWS_AS(pair_ansatz(0.8, 1.0, 0.0, 1e-2, 0.4, nullptr), DomainError);
    const VortexConfig wrong_s{{{0.8, 0.0}, {-0.8, 0.0}}, {1.0, -1.0}, 0.6};
    CHECK_THROWS_AS(make_ansatz(wrong_s, 1e-2, 0.0, 0.4, p), DomainError);
}

TEST_CASE("nonpositive lambda is a configuration error") {
    const auto p = profile(0.75, 2.5);
    CHECK_THROWS_AS(pair_ansatz(0.8, 1.0, pair_speed(0.75), 1e-2, 0.4, p), ConfigError);
    CHECK_NOTHROW(pair_ansatz(0.8, 10.0, pair_speed(0.75) * 10.0, 1e-2, 0.4, p));
}

TEST_CASE("error field grid must fit in the cutoff ball") {
    const auto p = half();
    const AnsatzParams B = pair_ansatz(0.8, 1.0, pair_speed(0.5), 1e-2, 0.4, p);
    CHECK_THROWS_AS(error_field(B, 2), DomainError);
    const double limit = B.delta / (B.eps * B.mu[0]) / p->R0;
    CHECK_THROWS_AS(error_field(B, 0, 21, 1.01 * limit), DomainError);
    CHECK_NOTHROW(error_field(B, 0, 21, 0.99 * limit));
    const ErrorField f = error_field(B, 0, 41);
    CHECK(f.sup_error > 0.0);
    CHECK(f.points.size() == f.values.size());
    for (const auto& z : f.points) CHECK(std::hypot(z.x, z.y) <= f.radius * (1 + 1e-12));
    std::ostringstream out;
    write_error_field_csv(out, f);
    CHECK(out.str().rfind("y1,y2,E\n", 0) == 0);
}

TEST_CASE("error scales like eps^(3-2s)") {
    const auto p = half();
    const AnsatzParams t = pair_ansatz(0.8, 1.0, pair_speed(0.5), 1e-2, 0.4, p);
    const std::vector<double> eps{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    const ErrorScalingReport r = scaling_study(eps, t);
    CHECK(r.slope == Approx(2.0).epsilon(0.05));
    CHECK(r.predicted == 2.0);
    for (std::size_t i = 1; i < r.sup_error.size(); ++i) CHECK(r.sup_error[i] < r.sup_error[i - 1]);
    const std::vector<double> rep{1e-2, 1e-2, 5e-3, 2.5e-3};
    CHECK_THROWS_AS(scaling_study(rep, t), DomainError);
    const std::vector<double> few{1e-2, 5e-3, 2.5e-3};
    CHECK_THROWS_AS(scaling_study(few, t), DomainError);
}

TEST_CASE("loglog slope") {
    const std::vector<double> x{1.0, 2.0, 4.0}, y{3.0, 12.0, 48.0};
    CHECK(loglog_slope(x, y) == Approx(2.0).epsilon(1e-14));
    const std::vector<double> same{2.0, 2.0, 2.0};
    CHECK_THROWS_AS(loglog_slope(same, y), DomainError);
    const std::vector<double> neg{1.0, -1.0, 2.0};
    CHECK_THROWS_AS(loglog_slope(x, neg), DomainError);
}

TEST_CASE("reduced function and its root") {
    const double c = -1.0 / (8.0 * kPi);
    const ReducedRoot r = reduced_root(c, 1.0, 0.5);
    CHECK(r.c1 == Approx(-1.0).epsilon(1e-13));
    REQUIRE(r.has_root);
    CHECK(std::abs(r.d_star - 1.0) < 1e-12);
    CHECK(std::abs(reduced_function(1.0, c, 1.0, 0.5)) < 1e-13);
    CHECK_FALSE(reduced_root(0.0, 1.0, 0.5).has_root);
    CHECK(reduced_function(2.0, 0.0, 1.0, 0.5) > 0.0);
    for (double s : {0.3, 0.7}) {
        const auto pr = vortex_pair(1.7, 1.0, s);
        const ReducedRoot q = reduced_root(pr.motion.value, 1.0, s);
        REQUIRE(q.has_root);
        CHECK(q.d_star == Approx(1.7).epsilon(1e-12));
    }
    CHECK_THROWS_AS(reduced_function(0.0, c, 1.0, 0.5), DomainError);
}

TEST_CASE("first-order error coefficient tracks the reduced function") {
    const auto p = half();
    const double c = pair_speed(0.5);
    auto ratio = [&](double d) {
        const AnsatzParams A = pair_ansatz(d, 1.0, c, 2e-3, 0.5 * d, p);
        const ErrorField f = error_field(A, 0, 101);
        return f.linear_coeff / std::pow(A.eps, 2.0) / reduced_function(d, c, 1.0, 0.5);
    };
    const double r1 = ratio(0.8), r2 = ratio(1.25);
    CHECK(r1 == Approx(r2).epsilon(0.05));
}

TEST_CASE("multi-vortex balancing residual vanishes for the pair") {
    const auto pr = vortex_pair(1.0, 1.0, 0.5);
    const std::vector<Vec2> p{{1.0, 0.0}}, q{{-1.0, 0.0}};
    CHECK(balancing_residual_multi(p, q, pr.motion.value, 0.5).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("single vortex without drift has no error") {
    const auto p = half();
    const VortexConfig one{{{0.0, 0.0}}, {1.0}, 0.5};
    const AnsatzParams A = make_ansatz(one, 1e-2, 0.0, 0.4, p);
    const ErrorField f = error_field(A, 0, 61);
    CHECK(f.sup_error == 0.0);
}

TEST_CASE("error is supported near the core and drops fourfold when eps halves") {
    const auto p = half();
    const double c = pair_speed(0.5);
    const ErrorField f = error_field(pair_ansatz(0.8, 1.0, c, 5e-3, 0.4, p), 0, 121);
    for (std::size_t i = 0; i < f.points.size(); ++i)
        if (std::hypot(f.points[i].x, f.points[i].y) > 1.2 * p->R0) CHECK(std::abs(f.values[i]) < 1e-12);
    const ErrorField g = error_field(pair_ansatz(0.8, 1.0, c, 2.5e-3, 0.4, p), 0, 121);
    CHECK(f.sup_error / g.sup_error == Approx(4.0).epsilon(0.2));
}

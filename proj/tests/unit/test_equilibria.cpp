#include <doctest.h>

#include <cmath>
#include <random>

#include "sqglab/constants.hpp"
#include "sqglab/equilibria.hpp"
#include "sqglab/error.hpp"

using namespace sqg;
using doctest::Approx;

namespace {

VortexConfig random_config(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kd(2, 6);
    std::uniform_real_distribution<double> pos(-2.0, 2.0), mag(0.5, 2.0), sd(0.05, 0.95);
    std::bernoulli_distribution sign(0.5);
    while (true) {
        VortexConfig c;
        const int k = kd(rng);
        for (int j = 0; j < k; ++j) {
            c.positions.push_back({pos(rng), pos(rng)});
            c.intensities.push_back(sign(rng) ? mag(rng) : -mag(rng));
        }
        c.s = sd(rng);
        if (c.min_separation() > 0.2) return c;
    }
}

double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("pair residual vanishes at the closed-form speed") {
    for (double s : {0.2, 0.5, 0.8, 1.0}) {
        const auto sol = vortex_pair(1.3, 0.7, s);
        CHECK(max_abs(traveling_residual(sol.config, sol.motion.value)) < 1e-12);
    }
    CHECK(vortex_pair(1.0, 1.0, 0.5).motion.value == Approx(-1.0 / (8.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("traveling residual is affine in c") {
    const auto sol = vortex_pair(1.0, 1.0, 0.5);
    const double c = sol.motion.value;
    const Eigen::VectorXd r = traveling_residual(sol.config, 2.0 * c);
    for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(r(2 * j)) < 1e-15);
        CHECK(r(2 * j + 1) == Approx(c).epsilon(1e-12));
    }
    const VortexConfig single{{{0.4, -0.2}}, {1.0}, 0.5};
    CHECK(max_abs(traveling_residual(single, 0.0)) == 0.0);
}

TEST_CASE("triangle rotating residual") {
    const auto tri = rotating_polygon(3, 1.0, 1.0, 0.5);
    CHECK(max_abs(rotating_residual(tri.config, 0.09189)) < 1e-5);
    CHECK(max_abs(rotating_residual(tri.config, tri.motion.value)) < 1e-12);
    CHECK(tri.motion.value == Approx(0.091889).epsilon(1e-5));
    const VortexConfig anti{{{1.0, 0.0}, {-1.0, 0.0}}, {1.0, 1.0}, 0.5};
    CHECK(max_abs(rotating_residual(anti, 0.0)) > 1e-3);
}

TEST_CASE("rotating residual is rotation covariant") {
    std::mt19937_64 rng(7);
    const VortexConfig c = random_config(rng);
    const double th = 0.83, ct = std::cos(th), st = std::sin(th);
    VortexConfig rc = c;
    for (auto& p : rc.positions) p = {ct * p.x - st * p.y, st * p.x + ct * p.y};
    const Eigen::VectorXd r = rotating_residual(c, 0.3), rr = rotating_residual(rc, 0.3);
    for (Eigen::Index j = 0; j < r.size() / 2; ++j) {
        CHECK(rr(2 * j) == Approx(ct * r(2 * j) - st * r(2 * j + 1)).epsilon(1e-12).scale(1.0));
        CHECK(rr(2 * j + 1) == Approx(st * r(2 * j) + ct * r(2 * j + 1)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("polygon closed form matches direct residual for several k and s") {
    for (int k : {2, 3, 4, 7})
        for (double s : {0.25, 0.5, 0.9}) {
            const auto p = rotating_polygon(k, 0.8, 1.4, s);
            CHECK(max_abs(rotating_residual(p.config, p.motion.value)) < 1e-12);
        }
}

TEST_CASE("closed-form constructors reject bad input") {
    CHECK_THROWS_AS(vortex_pair(0.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(vortex_pair(-1.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(rotating_polygon(1, 1.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(vortex_pair(1.0, 1.0, 1.2), DomainError);
}

TEST_CASE("energy gradients are the rotated and plain residuals") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> par(-0.5, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        const VortexConfig c = random_config(rng);
        const double cc = par(rng), alpha = par(rng);
        const Eigen::VectorXd gI = grad_I(c, cc), rI = traveling_residual(c, cc);
        const Eigen::VectorXd gJ = grad_J(c, alpha), rJ = rotating_residual(c, alpha);
        for (std::size_t j = 0; j < c.size(); ++j) {
            const double m = c.intensities[j];
            const auto i = Eigen::Index(2 * j);
            CHECK(std::abs(gI(i) - m * rI(i + 1)) < 1e-10);
            CHECK(std::abs(gI(i + 1) + m * rI(i)) < 1e-10);
            CHECK(std::abs(gJ(i) - m * rJ(i)) < 1e-10);
            CHECK(std::abs(gJ(i + 1) - m * rJ(i + 1)) < 1e-10);
        }
    }
}

TEST_CASE("energy gradients match finite differences") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        VortexConfig c = random_config(rng);
        const Eigen::VectorXd g = grad_I(c, 0.2), gj = grad_J(c, -0.1);
        Eigen::VectorXd fd(g.size()), fdj(g.size());
        const double h = 1e-5;
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            VortexConfig a = c, b = c;
            double& pa = (i % 2 == 0) ? a.positions[i / 2].x : a.positions[i / 2].y;
            double& pb = (i % 2 == 0) ? b.positions[i / 2].x : b.positions[i / 2].y;
            pa += h;
            pb -= h;
            fd(i) = (energy_I(a, 0.2) - energy_I(b, 0.2)) / (2 * h);
            fdj(i) = (energy_J(a, -0.1) - energy_J(b, -0.1)) / (2 * h);
        }
        CHECK((fd - g).norm() / g.norm() < 1e-6);
        CHECK((fdj - gj).norm() / gj.norm() < 1e-6);
    }
}

TEST_CASE("balancing residual under reflection") {
    const auto ref = six_vortex_reference();
    auto [p, q] = ref.reconstruct();
    const Eigen::VectorXd r = balancing_residual(p, q, ref.c, 0.5);
    for (auto& v : p) v.x = -v.x;
    for (auto& v : q) v.x = -v.x;
    const Eigen::VectorXd rr = balancing_residual(p, q, -ref.c, 0.5);
    for (Eigen::Index i = 0; i < r.size(); i += 2) {
        CHECK(rr(i) == Approx(-r(i)).epsilon(1e-12).scale(1.0));
        CHECK(rr(i + 1) == Approx(r(i + 1)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("symmetric array reconstruction") {
    const auto ref = six_vortex_reference();
    CHECK(ref.free_count() == 3);
    const auto [p, q] = ref.reconstruct();
    REQUIRE(p.size() == 3);
    CHECK(p[0].x == -1.026);
    CHECK(p[1].y == -0.563);
    CHECK(p[2].y == 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(q[i].x == -p[i].x);
        CHECK(q[i].y == p[i].y);
    }
    SymmetricArrayParams bad{3, 2, {1.0, 1.0, 1.0}, 0.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("six-vortex array from perturbed coordinates") {
    auto guess = six_vortex_reference();
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (double& x : guess.coords) x += u(rng);
    const auto [p, q] = guess.reconstruct();
    guess.c = fit_array_speed(p, q, 0.5);
    const ArraySolution sol = solve_symmetric_array(guess, 0.5, 2, 0.368);
    CHECK(sol.solution.residual_norm < 1e-9);
    CHECK(std::abs(sol.params.coords[0] + 1.026) < 2e-3);
    CHECK(std::abs(sol.params.coords[1] - 0.563) < 2e-3);
    CHECK(sol.params.coords[2] == Approx(0.368).epsilon(1e-14));
    REQUIRE(sol.solution.certificate);
    CHECK(sol.solution.certificate->kernel_dimension == 0);
    CHECK(sol.reduced.kernel_dimension == 0);
}

TEST_CASE("newton accepts an exact root without iterating") {
    const auto pr = vortex_pair(1.0, 1.0, 0.5);
    std::vector<GaugeRow> g{pin_coordinate(5, 0, 1.0), pin_coordinate(5, 1, 0.0),
                            pin_coordinate(5, 2, -1.0), pin_coordinate(5, 3, 0.0)};
    const auto sol = solve_traveling(pr.config, pr.motion.value, g);
    CHECK(sol.iterations == 0);
    CHECK(sol.motion.value == pr.motion.value);
}

TEST_CASE("perturbed triangle reconverges to the polygon") {
    const auto tri = rotating_polygon(3, 1.0, 1.0, 0.5);
    VortexConfig guess = tri.config;
    guess.positions[1].x += 0.1;
    guess.positions[1].y -= 0.1;
    guess.positions[2].x -= 0.1;
    std::vector<GaugeRow> g{pin_coordinate(7, 0, 1.0), pin_coordinate(7, 1, 0.0)};
    const auto sol = solve_rotating(guess, 0.08, g);
    CHECK(std::abs(sol.motion.value - tri.motion.value) < 1e-8);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(std::abs(sol.config.positions[j].x - tri.config.positions[j].x) < 1e-8);
        CHECK(std::abs(sol.config.positions[j].y - tri.config.positions[j].y) < 1e-8);
    }
}

TEST_CASE("rank-deficient gauge is reported") {
    const auto pr = vortex_pair(1.0, 1.0, 0.5);
    CHECK_THROWS_AS(solve_traveling(pr.config, pr.motion.value * 1.1, {}), ConvergenceError);
}

TEST_CASE("hessian certificates") {
    const auto pr = vortex_pair(1.0, 1.0, 0.5);
    const std::vector<Eigen::VectorXd> tg{translation_generator(2, {1, 0}), translation_generator(2, {0, 1})};
    const Certificate cp = nondegeneracy_spectrum(pr, tg);
    CHECK(cp.kernel_dimension == 2);
    CHECK(cp.matches_symmetry);
    CHECK(symmetric_array_certificate({1, 0, {1.0}, pr.motion.value}, 0.5).kernel_dimension == 0);

    const auto tri = rotating_polygon(3, 1.0, 1.0, 0.5);
    const std::vector<Eigen::VectorXd> rg{rotation_generator(tri.config)};
    const Certificate ct = nondegeneracy_spectrum(tri, rg);
    CHECK(ct.kernel_dimension == 1);
    CHECK(ct.matches_symmetry);
    CHECK(ct.subspace_angle < 1e-6);
}

TEST_CASE("hessian is symmetric to finite-difference accuracy") {
    std::mt19937_64 rng(5);
    const VortexConfig c = random_config(rng);
    const Eigen::MatrixXd H = hessian_I(c, 0.1);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, H.cwiseAbs().maxCoeff()));
}

TEST_CASE("pair continued in s follows the closed form") {
    ContinuationProblem prob;
    prob.residual = [](const Eigen::VectorXd& x, double s) {
        VortexConfig c{{{x(0), x(1)}, {x(2), x(3)}}, {1.0, -1.0}, s};
        return traveling_residual(c, x(4));
    };
    prob.gauge = {pin_coordinate(5, 0, 1.0), pin_coordinate(5, 1, 0.0), pin_coordinate(5, 2, -1.0),
                  pin_coordinate(5, 3, 0.0)};
    Eigen::VectorXd x0(5);
    x0 << 1.0, 0.0, -1.0, 0.0, vortex_pair(1.0, 1.0, 0.5).motion.value;
    const Branch br = continue_in_s(prob, x0, 0.5, 0.9, 8);
    CHECK_FALSE(br.failed);
    CHECK_FALSE(br.bifurcation);
    REQUIRE(br.points.size() == 9);
    for (const auto& pt : br.points) CHECK(std::abs(pt.x(4) - vortex_pair(1.0, 1.0, pt.s).motion.value) < 1e-9);
    CHECK(br.points.back().s == Approx(0.9));

    const Branch same = continue_in_s(prob, x0, 0.5, 0.9, 0);
    REQUIRE(same.points.size() == 1);
    CHECK((same.points[0].x - x0).norm() < 1e-14);
}

TEST_CASE("six-vortex branch continues in s") {
    const auto ref = six_vortex_reference();
    const ArraySolution sol = solve_symmetric_array(ref, 0.5, 2, 0.368);
    const Branch br = continue_symmetric_array(sol.params, 0.5, 0.6, 4, 2, 0.368);
    CHECK_FALSE(br.failed);
    for (const auto& pt : br.points) CHECK(pt.residual_norm < 1e-9);
}

#include <doctest.h>

#include <cmath>

#include "sqglab/error.hpp"
#include "sqglab/linop.hpp"
#include "sqglab/plasma.hpp"

using namespace sqg;
using doctest::Approx;

namespace {
const RadialProfile& reference() {
    static const RadialProfile p = [] {
        GridSpec g;
        g.N = 200;
        return solve_ground_state({2, 0.5, 2.5}, g);
    }();
    return p;
}
}  // namespace

TEST_CASE("potential V") {
    const RadialProfile& p = reference();
    const auto V = potential_V(p);
    REQUIRE(V.size() == p.nodes.size());
    CHECK(V[0] == Approx(2.5 * std::pow(p.W0() - 1.0, 1.5)).epsilon(1e-12));
    for (std::size_t i = p.boundary_index; i < V.size(); ++i) CHECK(V[i] == 0.0);
    CHECK_THROWS_AS(potential_V(RadialProfile{}), DomainError);
}

TEST_CASE("mode operator structure") {
    const RadialProfile& p = reference();
    const ModeOperator op = mode_operator(p, 2);
    CHECK(op.A.rows() == Eigen::Index(p.boundary_index));
    CHECK(op.A.rows() == op.A.cols());
    CHECK(op.D.size() == op.A.rows());
    CHECK((op.D.array() > 0.0).all());
    const Eigen::VectorXd sq = op.D.cwiseSqrt();
    const Eigen::MatrixXd S = sq.asDiagonal() * op.A * sq.cwiseInverse().asDiagonal();
    CHECK((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-12 * S.cwiseAbs().maxCoeff());
    CHECK_THROWS_AS(mode_operator(p, -1), DomainError);
}

TEST_CASE("mode 1 carries the translation eigenvalue") {
    const ModeSpectrumReport r = mode_spectrum(reference(), 1);
    CHECK(r.distance_to_one < 1e-2);
    REQUIRE(r.eigvec_correlation);
    CHECK(*r.eigvec_correlation > 0.999);
    CHECK(r.flagged);
    CHECK(r.symmetry_defect < 1e-12);
    CHECK(r.min_entry >= 0.0);
    for (std::size_t i = 1; i < r.eigenvalues.size(); ++i) CHECK(r.eigenvalues[i] <= r.eigenvalues[i - 1]);
}

TEST_CASE("other modes stay away from 1") {
    const auto reps = nondegeneracy_report(reference(), 4);
    REQUIRE(reps.size() == 5);
    for (const auto& r : reps) {
        if (r.mode == 1) continue;
        CHECK(r.distance_to_one > 0.05);
        CHECK_FALSE(r.flagged);
        CHECK_FALSE(r.eigvec_correlation);
    }
    CHECK(reps[2].eigenvalues.front() > reps[3].eigenvalues.front());
    CHECK(reps[3].eigenvalues.front() > reps[4].eigenvalues.front());
    CHECK_THROWS_AS(nondegeneracy_report(reference(), 0), DomainError);
    int flags_small = 0, flags_large = 0;
    for (const auto& r : nondegeneracy_report(reference(), 2)) flags_small += r.flagged;
    for (const auto& r : reps) flags_large += r.flagged;
    CHECK(flags_small == 1);
    CHECK(flags_large == flags_small);
}

TEST_CASE("dilation mode") {
    CHECK(dilation_mode_residual(reference()) < 0.1);
}

#include "sqglab/newton.hpp"

#include <algorithm>
#include <cmath>

#include "sqglab/error.hpp"

namespace sqg {

GaugeRow pin_coordinate(Eigen::Index n, Eigen::Index index, double value, std::string label) {
    GaugeRow row{Eigen::VectorXd::Zero(n), value, std::move(label)};
    row.coeffs(index) = 1.0;
    return row;
}

const char* to_string(NewtonStatus status) {
    switch (status) {
        case NewtonStatus::converged: return "converged";
        case NewtonStatus::max_iterations: return "max_iterations";
        case NewtonStatus::rank_deficient: return "rank_deficient";
        case NewtonStatus::stalled: return "stalled";
    }
    return "unknown";
}

Eigen::MatrixXd fd_jacobian(const ResidualFn& f, const Eigen::VectorXd& x, double rel_step) {
    Eigen::VectorXd xp = x;
    Eigen::MatrixXd J;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = rel_step * std::max(1.0, std::abs(x(j)));
        xp(j) = x(j) + h;
        const Eigen::VectorXd fp = f(xp);
        xp(j) = x(j) - h;
        const Eigen::VectorXd fm = f(xp);
        xp(j) = x(j);
        if (j == 0) J.resize(fp.size(), x.size());
        J.col(j) = (fp - fm) / (2.0 * h);
    }
    return J;
}

namespace {

Eigen::VectorXd augmented(const ResidualFn& f, std::span<const GaugeRow> gauge,
                          const Eigen::VectorXd& x) {
    const Eigen::VectorXd r = f(x);
    Eigen::VectorXd out(r.size() + Eigen::Index(gauge.size()));
    out.head(r.size()) = r;
    for (std::size_t g = 0; g < gauge.size(); ++g)
        out(r.size() + Eigen::Index(g)) = gauge[g].coeffs.dot(x) - gauge[g].target;
    return out;
}

Eigen::MatrixXd augmented_jacobian(const ResidualFn& f, std::span<const GaugeRow> gauge,
                                   const Eigen::VectorXd& x, double rel_step) {
    const Eigen::MatrixXd J = fd_jacobian(f, x, rel_step);
    Eigen::MatrixXd out(J.rows() + Eigen::Index(gauge.size()), x.size());
    out.topRows(J.rows()) = J;
    for (std::size_t g = 0; g < gauge.size(); ++g)
        out.row(J.rows() + Eigen::Index(g)) = gauge[g].coeffs.transpose();
    return out;
}

}  // namespace

NewtonResult solve_newton(const ResidualFn& f, Eigen::VectorXd x0,
                          std::span<const GaugeRow> gauge, const NewtonOptions& opt) {
    for (const auto& g : gauge)
        if (g.coeffs.size() != x0.size())
            throw DomainError("solve_newton: gauge row length does not match unknowns");

    NewtonResult res;
    res.x = std::move(x0);
    Eigen::VectorXd F = augmented(f, gauge, res.x);
    if (!F.allFinite()) throw DomainError("solve_newton: initial residual is not finite");
    res.residual_norm = F.lpNorm<Eigen::Infinity>();

    for (;;) {
        res.jacobian = augmented_jacobian(f, gauge, res.x, opt.fd_rel_step);
        if (res.residual_norm < opt.tol) {
            res.status = NewtonStatus::converged;
            return res;
        }
        if (res.iterations >= opt.max_iter) {
            res.status = NewtonStatus::max_iterations;
            return res;
        }

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(res.jacobian);
        qr.setThreshold(opt.rank_tol);
        if (qr.rank() < res.x.size()) {
            res.status = NewtonStatus::rank_deficient;
            return res;
        }
        const Eigen::VectorXd dx = qr.solve(-F);

        // Backtracking on the Euclidean merit; accept the first decrease.
        const double merit = F.norm();
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
            const Eigen::VectorXd xt = res.x + t * dx;
            Eigen::VectorXd Ft;
            try {
                Ft = augmented(f, gauge, xt);
            } catch (const SingularityError&) {
                continue;  // trial point collided; shorten the step
            }
            if (Ft.allFinite() && Ft.norm() < merit) {
                res.x = xt;
                F = Ft;
                accepted = true;
                break;
            }
        }
        ++res.iterations;
        if (!accepted) {
            res.status = NewtonStatus::stalled;
            return res;
        }
        res.residual_norm = F.lpNorm<Eigen::Infinity>();
    }
}

}  // namespace sqg

#include "sqglab/linop.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "sqglab/error.hpp"
#include "sqglab/radial_kernel.hpp"

namespace sqg {

std::vector<double> potential_V(const RadialProfile& p) {
    if (p.nodes.empty() || p.values.size() != p.nodes.size())
        throw DomainError("potential_V: empty profile");
    const double g = p.params.gamma;
    std::vector<double> V(p.values.size());
    for (std::size_t i = 0; i < V.size(); ++i) {
        const double e = p.values[i] - 1.0;
        V[i] = e > 0.0 ? g * std::pow(e, g - 1.0) : 0.0;
    }
    return V;
}

namespace {

// Nodes with V > 0 form a prefix 0..n-1 of a decreasing profile.
std::size_t support_size(const std::vector<double>& V) {
    std::size_t n = 0;
    while (n < V.size() && V[n] > 0.0) ++n;
    if (n < 3) throw DomainError("mode_operator: potential support has fewer than three nodes");
    return n;
}

// Hat-function weights on the support nodes plus the boundary node, boundary column dropped.
Eigen::MatrixXd support_weights(const RadialProfile& p, std::size_t n, int mode, int threads) {
    const std::span<const double> all(p.nodes);
    const auto W = product_integration_matrix(all.first(n), all.first(n + 1), n + 1, p.params.s,
                                              mode, threads, Interpolation::linear);
    return W.leftCols(Eigen::Index(n));
}

}  // namespace

ModeOperator mode_operator(const RadialProfile& p, int mode, int threads) {
    if (mode < 0) throw DomainError("mode_operator: negative mode");
    const std::vector<double> V = potential_V(p);
    const std::size_t n = support_size(V);
    if (n + 1 > p.nodes.size()) throw DomainError("mode_operator: support reaches the grid end");
    const Eigen::MatrixXd K = support_weights(p, n, mode, threads);
    const std::vector<double> w =
        radial_hat_moments(std::span<const double>(p.nodes).first(n + 1), Interpolation::linear);

    ModeOperator op;
    op.mode = mode;
    op.nodes.assign(p.nodes.begin(), p.nodes.begin() + long(n));
    const Eigen::Index N = Eigen::Index(n);
    Eigen::MatrixXd k(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j)
            k(i, j) = 0.5 * (K(i, j) / w[std::size_t(j)] + K(j, i) / w[std::size_t(i)]);
    op.D.resize(N);
    for (Eigen::Index j = 0; j < N; ++j) op.D(j) = w[std::size_t(j)] * V[std::size_t(j)];
    op.A = k * op.D.asDiagonal();
    if (!op.A.allFinite()) throw SingularityError("mode_operator: non-finite matrix entries");
    return op;
}

ModeSpectrumReport mode_spectrum(const RadialProfile& p, int mode, int threads, double threshold) {
    const ModeOperator op = mode_operator(p, mode, threads);
    const Eigen::VectorXd sq = op.D.cwiseSqrt();
    const Eigen::MatrixXd S = sq.asDiagonal() * op.A * sq.cwiseInverse().asDiagonal();

    ModeSpectrumReport rep;
    rep.mode = mode;
    rep.symmetry_defect = (S - S.transpose()).cwiseAbs().maxCoeff();
    rep.min_entry = op.A.minCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
    if (es.info() != Eigen::Success) throw ConvergenceError("mode_spectrum: eigensolver failed", 0.0);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Eigen::Index N = ev.size();
    Eigen::Index best = 0;
    for (Eigen::Index i = 0; i < N; ++i) {
        rep.eigenvalues.push_back(ev(N - 1 - i));
        if (std::abs(ev(i) - 1.0) < std::abs(ev(best) - 1.0)) best = i;
    }
    rep.nearest = ev(best);
    rep.distance_to_one = std::abs(ev(best) - 1.0);
    rep.flagged = rep.distance_to_one < threshold;

    if (mode == 1) {
        // A x = lambda x with x = k D^{1/2} y / lambda.
        const Eigen::VectorXd y = es.eigenvectors().col(best);
        const Eigen::VectorXd x = op.A * sq.cwiseInverse().cwiseProduct(y);
        const std::vector<double> dW = profile_derivative(p);
        Eigen::VectorXd ref(N);
        for (Eigen::Index i = 0; i < N; ++i) ref(i) = -dW[std::size_t(i)];
        rep.eigvec_correlation = std::abs(x.dot(ref)) / (x.norm() * ref.norm());
    }
    return rep;
}

std::vector<ModeSpectrumReport> nondegeneracy_report(const RadialProfile& p, int max_mode,
                                                     int threads, double threshold) {
    if (max_mode < 1) throw DomainError("nondegeneracy_report: max_mode must be at least 1");
    std::vector<ModeSpectrumReport> out;
    for (int m = 0; m <= max_mode; ++m) out.push_back(mode_spectrum(p, m, threads, threshold));
    return out;
}

double dilation_mode_residual(const RadialProfile& p, int threads) {
    const std::vector<double> V = potential_V(p);
    const std::size_t n = support_size(V);
    const Eigen::MatrixXd K = support_weights(p, n, 0, threads);
    const double a = 2.0 * p.params.s / (p.params.gamma - 1.0);
    const std::vector<double> dW = profile_derivative(p);
    const Eigen::Index N = Eigen::Index(n);
    Eigen::VectorXd z(N), Vz(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const std::size_t u = std::size_t(i);
        z(i) = a * (p.values[u] - 1.0) + p.nodes[u] * dW[u];
        Vz(i) = V[u] * z(i);
    }
    const Eigen::VectorXd r = z - K * Vz + Eigen::VectorXd::Constant(N, a);
    return r.lpNorm<Eigen::Infinity>() / a;
}

}  // namespace sqg

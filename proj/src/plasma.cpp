#include "sqglab/plasma.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "sqglab/error.hpp"
#include "sqglab/radial_kernel.hpp"

namespace sqg {

void GridSpec::validate() const {
    if (N < 8 || N % 2 != 0) throw DomainError("grid: N must be an even integer >= 8");
    if (!(R_max > 2.0) || !std::isfinite(R_max)) throw DomainError("grid: R_max must exceed 2");
    if (!(tol > 0.0)) throw DomainError("grid: tol must be positive");
    if (max_iter < 1) throw DomainError("grid: max_iter must be positive");
}

std::vector<double> normalized_grid(int N, double R_max) {
    GridSpec{N, R_max}.validate();
    const int n_in = N / 2, n_out = N - n_in;
    std::vector<double> r(std::size_t(N) + 1);
    for (int i = 0; i <= n_in; ++i) {
        const double xi = double(i) / n_in;
        r[std::size_t(i)] = 0.5 * xi + 0.5 * std::sin(0.5 * kPi * xi);
    }
    r[std::size_t(n_in)] = 1.0;
    const double h0 = 1.0 - r[std::size_t(n_in) - 1];
    const double span = R_max - 1.0;
    // h0 (q^n - 1)/(q - 1) = span
    auto total = [&](double q) { return h0 * (std::pow(q, n_out) - 1.0) / (q - 1.0); };
    double lo = 1.0 + 1e-12, hi = 2.0;
    if (h0 * n_out >= span) throw DomainError("grid: R_max too small for the outer grid");
    while (total(hi) < span) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (total(mid) < span ? lo : hi) = mid;
    }
    const double q = 0.5 * (lo + hi);
    double h = h0;
    for (int i = n_in + 1; i <= N; ++i, h *= q) r[std::size_t(i)] = r[std::size_t(i) - 1] + h;
    r.back() = R_max;
    return r;
}

namespace {

double positive_power(double v, double g) { return v > 0.0 ? std::pow(v, g) : 0.0; }

// Fritsch-Carlson slopes with zero slope at r = 0 (even profile).
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0), delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) continue;
        const double h0 = x[k] - x[k - 1], h1 = x[k + 1] - x[k];
        const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
        d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    d[n - 1] = delta[n - 2];
    return d;
}

struct Interp {
    std::size_t k;
    double h, t;
};

Interp locate(const std::vector<double>& x, double r) {
    auto it = std::upper_bound(x.begin(), x.end(), r);
    std::size_t k = it == x.begin() ? 0 : std::size_t(it - x.begin()) - 1;
    k = std::min(k, x.size() - 2);
    const double h = x[k + 1] - x[k];
    return {k, h, (r - x[k]) / h};
}

double tail_model(const RadialProfile& p, double r, double* deriv) {
    const double s = p.params.s, c = riesz_constant(2, s);
    const double Rm = p.R_max();
    const double asym_m = p.Mgamma * c * std::pow(Rm, 2.0 * s - 2.0);
    const double kappa = p.values.back() / asym_m - 1.0;
    const double asym = p.Mgamma * c * std::pow(r, 2.0 * s - 2.0);
    const double q = (Rm / r) * (Rm / r);
    if (deriv) *deriv = asym / r * ((2.0 * s - 2.0) * (1.0 + kappa * q) - 2.0 * kappa * q);
    return asym * (1.0 + kappa * q);
}

void require_profile(const RadialProfile& p) {
    if (p.nodes.size() < 3 || p.values.size() != p.nodes.size())
        throw DomainError("profile: empty or inconsistent grid");
}

}  // namespace

RadialProfile solve_ground_state(const FracParams& params, const GridSpec& grid) {
    params.validate_plasma();
    if (params.n != 2) throw DomainError("solve_ground_state: only n = 2 is supported");
    grid.validate();
    const double s = params.s, g = params.gamma;
    const std::vector<double> rho = normalized_grid(grid.N, grid.R_max);
    const Eigen::Index n = grid.N / 2;  // index of rho = 1
    const Eigen::MatrixXd A =
        product_integration_matrix(rho, rho, std::size_t(n) + 1, s, 0, grid.threads);
    const Eigen::MatrixXd Ain = A.topLeftCorner(n, n);
    const Eigen::RowVectorXd Ab = A.row(n).head(n);

    auto source = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd f(n);
        for (Eigen::Index i = 0; i < n; ++i) f(i) = positive_power(u(i), g);
        return f;
    };
    auto T = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd f = source(u);
        return Eigen::VectorXd((Ain * f).array() - Ab.dot(f));
    };

    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = 1.0 - rho[std::size_t(i)] * rho[std::size_t(i)];

    // Petviashvili iteration for the degree-gamma homogeneous map u = T(u).
    int iterations = 0;
    for (; iterations < 500; ++iterations) {
        const Eigen::VectorXd Tu = T(u);
        const double mstab = u.squaredNorm() / u.dot(Tu);
        if (!(mstab > 0.0) || !std::isfinite(mstab))
            throw ConvergenceError("solve_ground_state: stabilizing factor lost positivity", 0.0);
        const Eigen::VectorXd next = std::pow(mstab, g / (g - 1.0)) * Tu;
        const double change = (next - u).lpNorm<Eigen::Infinity>() / next.lpNorm<Eigen::Infinity>();
        u = next;
        if (change < 1e-6) break;
    }

    // Newton polish with backtracking (at most 8 halvings per step).
    auto F = [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(v - T(v)); };
    Eigen::VectorXd Fu = F(u);
    double fnorm = Fu.lpNorm<Eigen::Infinity>();
    const double target = 1e-14 * u.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < grid.max_iter && fnorm > target; ++it) {
        ++iterations;
        Eigen::VectorXd d(n);
        for (Eigen::Index j = 0; j < n; ++j) d(j) = u(j) > 0.0 ? g * std::pow(u(j), g - 1.0) : 0.0;
        Eigen::MatrixXd J = -(Ain.rowwise() - Ab) * d.asDiagonal();
        J.diagonal().array() += 1.0;
        const Eigen::VectorXd step = J.partialPivLu().solve(-Fu);
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h <= 8; ++h, t *= 0.5) {
            const Eigen::VectorXd trial = u + t * step;
            const Eigen::VectorXd Ft = F(trial);
            const double tn = Ft.lpNorm<Eigen::Infinity>();
            if (std::isfinite(tn) && tn < fnorm) {
                u = trial;
                Fu = Ft;
                fnorm = tn;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }

    // Back to physical variables: u = beta (W(R0 rho) - 1), R0 = beta^{1/a}.
    Eigen::VectorXd f_all = Eigen::VectorXd::Zero(n + 1);
    f_all.head(n) = source(u);
    const Eigen::VectorXd P = A * f_all;
    const double beta = P(n);
    const double a = 2.0 * s / (g - 1.0);
    if (!(beta > 0.0)) throw ConvergenceError("solve_ground_state: nonpositive threshold", fnorm);

    RadialProfile prof;
    prof.params = params;
    prof.R0 = std::pow(beta, 1.0 / a);
    prof.boundary_index = std::size_t(n);
    prof.iterations = iterations;
    prof.nodes.resize(rho.size());
    prof.values.resize(rho.size());
    prof.source.assign(rho.size(), 0.0);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        prof.nodes[i] = prof.R0 * rho[i];
        prof.values[i] = i < std::size_t(n) ? 1.0 + u(Eigen::Index(i)) / beta
                                            : P(Eigen::Index(i)) / beta;
        prof.source[i] = positive_power(prof.values[i] - 1.0, g);
    }
    prof.values[std::size_t(n)] = 1.0;
    prof.source[std::size_t(n)] = 0.0;

    const std::vector<double> mom =
        radial_hat_moments(std::span<const double>(prof.nodes).first(std::size_t(n) + 1));
    for (std::size_t j = 0; j <= std::size_t(n); ++j)
        prof.Mgamma += 2.0 * kPi * prof.source[j] * mom[j];

    // Residual of the physical discrete equation, W = R0^{2s} A F.
    {
        Eigen::VectorXd Fp = Eigen::VectorXd::Zero(n + 1);
        for (Eigen::Index j = 0; j < n; ++j) Fp(j) = prof.source[std::size_t(j)];
        const Eigen::VectorXd AW = std::pow(prof.R0, 2.0 * s) * (A * Fp);
        double res = 0.0;
        for (Eigen::Index i = 0; i < AW.size(); ++i)
            res = std::max(res, std::abs(prof.values[std::size_t(i)] - AW(i)));
        prof.residual_norm = res;
    }
    if (!(prof.residual_norm < grid.tol))
        throw ConvergenceError("solve_ground_state: discrete residual " +
                                   std::to_string(prof.residual_norm) + " above tolerance",
                               prof.residual_norm);

    // Tail fit W r^{2-2s} = A0 + B / r^2 on the outer quarter.
    {
        std::vector<double> rr, yy;
        for (std::size_t i = 0; i < prof.nodes.size(); ++i)
            if (prof.nodes[i] >= 0.25 * prof.R_max()) {
                rr.push_back(prof.nodes[i]);
                yy.push_back(prof.values[i] * std::pow(prof.nodes[i], 2.0 - 2.0 * s));
            }
        Eigen::MatrixXd M(Eigen::Index(rr.size()), 2);
        Eigen::VectorXd y(Eigen::Index(rr.size()));
        for (std::size_t i = 0; i < rr.size(); ++i) {
            M(Eigen::Index(i), 0) = 1.0;
            M(Eigen::Index(i), 1) = 1.0 / (rr[i] * rr[i]);
            y(Eigen::Index(i)) = yy[i];
        }
        prof.tail_coeff = M.colPivHouseholderQr().solve(y)(0);
    }
    return prof;
}

double discrete_residual(const RadialProfile& p, int threads) {
    require_profile(p);
    const std::size_t cols = p.boundary_index + 1;
    const Eigen::MatrixXd A =
        product_integration_matrix(p.nodes, p.nodes, cols, p.params.s, 0, threads);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(Eigen::Index(cols));
    for (std::size_t j = 0; j < cols; ++j)
        F(Eigen::Index(j)) = positive_power(p.values[j] - 1.0, p.params.gamma);
    const Eigen::VectorXd AF = A * F;
    double res = 0.0;
    for (Eigen::Index i = 0; i < AF.size(); ++i)
        res = std::max(res, std::abs(p.values[std::size_t(i)] - AF(i)));
    return res;
}

double evaluate_W(const RadialProfile& p, double r) {
    require_profile(p);
    if (!(r >= 0.0)) throw DomainError("evaluate_W: negative radius");
    if (r > p.R_max()) return tail_model(p, r, nullptr);
    static thread_local const RadialProfile* cached = nullptr;
    static thread_local std::vector<double> slopes;
    static thread_local std::size_t cached_size = 0;
    static thread_local double cached_w0 = 0.0;
    if (cached != &p || cached_size != p.values.size() || cached_w0 != p.values.front()) {
        slopes = monotone_slopes(p.nodes, p.values);
        cached = &p;
        cached_size = p.values.size();
        cached_w0 = p.values.front();
    }
    const Interp q = locate(p.nodes, r);
    const double t = q.t, t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p.values[q.k] + (t3 - 2 * t2 + t) * q.h * slopes[q.k] +
           (-2 * t3 + 3 * t2) * p.values[q.k + 1] + (t3 - t2) * q.h * slopes[q.k + 1];
}

double evaluate_dW(const RadialProfile& p, double r) {
    require_profile(p);
    if (!(r >= 0.0)) throw DomainError("evaluate_dW: negative radius");
    if (r > p.R_max()) {
        double d = 0.0;
        tail_model(p, r, &d);
        return d;
    }
    const std::vector<double> slopes = monotone_slopes(p.nodes, p.values);
    const Interp q = locate(p.nodes, r);
    const double t = q.t, t2 = t * t;
    return ((6 * t2 - 6 * t) * p.values[q.k] + (3 * t2 - 4 * t + 1) * q.h * slopes[q.k] +
            (-6 * t2 + 6 * t) * p.values[q.k + 1] + (3 * t2 - 2 * t) * q.h * slopes[q.k + 1]) /
           q.h;
}

std::vector<double> profile_derivative(const RadialProfile& p) {
    require_profile(p);
    const std::size_t n = p.nodes.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t first = std::min(k < 2 ? 0 : k - 2, n - 5);
        const double x = p.nodes[k];
        double sum = 0.0;
        for (std::size_t a = first; a < first + 5; ++a) {
            // derivative of the Lagrange basis l_a at x
            double da = 0.0;
            for (std::size_t b = first; b < first + 5; ++b) {
                if (b == a) continue;
                double term = 1.0 / (p.nodes[a] - p.nodes[b]);
                for (std::size_t c = first; c < first + 5; ++c)
                    if (c != a && c != b) term *= (x - p.nodes[c]) / (p.nodes[a] - p.nodes[c]);
                da += term;
            }
            sum += da * p.values[a];
        }
        d[k] = sum;
    }
    return d;
}

double potential_at(const RadialProfile& p, double r) {
    require_profile(p);
    const std::size_t cols = p.boundary_index + 1;
    std::vector<double> x(p.nodes.begin(), p.nodes.begin() + long(cols));
    std::vector<double> f(p.source.begin(), p.source.begin() + long(cols));
    return mode_potential(r, x, f, p.params.s, 0);
}

PlasmaDiagnostics diagnostics(const RadialProfile& p, std::span<const double> factors) {
    require_profile(p);
    if (!(p.values.front() > 1.0) || !(p.values.back() < 1.0))
        throw DomainError("diagnostics: profile does not cross the threshold 1");
    PlasmaDiagnostics d;
    double lo = 0.0, hi = p.R_max();
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (evaluate_W(p, mid) > 1.0 ? lo : hi) = mid;
    }
    d.R0 = 0.5 * (lo + hi);
    const std::vector<double> mom =
        radial_hat_moments(std::span<const double>(p.nodes).first(p.boundary_index + 1));
    for (std::size_t j = 0; j <= p.boundary_index; ++j)
        d.Mgamma += 2.0 * kPi * p.source[j] * mom[j];
    const double s = p.params.s, c = riesz_constant(2, s);
    for (double f : factors) {
        if (!(f > 0.0)) throw DomainError("diagnostics: tail factors must be positive");
        TailSample t;
        t.r = f * d.R0;
        const double W = potential_at(p, t.r);
        const double h = 1e-3 * t.r;
        const double dW = (potential_at(p, t.r + h) - potential_at(p, t.r - h)) / (2.0 * h);
        t.ratio = W * std::pow(t.r, 2.0 - 2.0 * s) / (d.Mgamma * c);
        t.derivative_ratio = -dW * std::pow(t.r, 3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * d.Mgamma * c);
        d.tail.push_back(t);
    }
    return d;
}

double dilation_residual(const RadialProfile& p, double lambda, int threads) {
    require_profile(p);
    if (!(lambda > 0.0)) throw DomainError("dilation_residual: lambda must be positive");
    const double s = p.params.s, g = p.params.gamma, a = 2.0 * s / (g - 1.0);
    const double la = std::pow(lambda, a);
    std::vector<double> x(p.nodes.size()), w(p.nodes.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = p.nodes[i] / lambda;
        w[i] = 1.0 + la * (p.values[i] - 1.0);
    }
    const std::size_t cols = p.boundary_index + 1;
    const Eigen::MatrixXd A = product_integration_matrix(x, x, cols, s, 0, threads);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(Eigen::Index(cols));
    for (std::size_t j = 0; j < cols; ++j) F(Eigen::Index(j)) = positive_power(w[j] - 1.0, g);
    const Eigen::VectorXd AF = A * F;
    double res = 0.0;
    for (Eigen::Index i = 0; i < AF.size(); ++i)
        res = std::max(res, std::abs(w[std::size_t(i)] - AF(i) - (1.0 - la)));
    return res;
}

void write_profile_csv(std::ostream& out, const RadialProfile& p) {
    require_profile(p);
    out.precision(17);
    out << "r,W,source\n";
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
        out << p.nodes[i] << ',' << p.values[i] << ',' << p.source[i] << '\n';
}

}  // namespace sqg

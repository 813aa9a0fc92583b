#include "sqglab/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "sqglab/equilibria.hpp"
#include "sqglab/error.hpp"
#include "sqglab/parallel.hpp"

namespace sqg {

double mu_from_mass(double m, const FracParams& params, double Mgamma) {
    params.validate_order();
    const double s = params.s, g = params.gamma;
    if (!(g > 1.0)) throw DomainError("mu_from_mass: gamma must exceed 1");
    if (m == 0.0 || !std::isfinite(m)) throw DomainError("mu_from_mass: m must be nonzero");
    if (!(Mgamma > 0.0)) throw DomainError("mu_from_mass: Mgamma must be positive");
    const double e = 2.0 * (1.0 - s * g / (g - 1.0));
    if (std::abs(e) < 1e-12) throw DomainError("mu_from_mass: degenerate exponent, gamma = 1/(1-s)");
    return std::pow(std::abs(m) / Mgamma, 1.0 / e);
}

double AnsatzParams::exponent() const {
    if (!profile) throw DomainError("ansatz: missing profile");
    return 2.0 * profile->params.s / (profile->params.gamma - 1.0);
}

void AnsatzParams::validate() const {
    if (!profile) throw DomainError("ansatz: missing profile");
    config.validate();
    const std::size_t k = config.size();
    if (std::abs(config.s - profile->params.s) > 1e-15)
        throw DomainError("ansatz: configuration and profile use different s");
    if (!(eps > 0.0)) throw DomainError("ansatz: eps must be positive");
    if (!(delta > eps)) throw DomainError("ansatz: need 0 < eps < delta");
    if (mu.size() != k) throw DomainError("ansatz: one mu per vortex required");
    for (double v : mu)
        if (!(v > 0.0)) throw DomainError("ansatz: mu must be positive");
    if (!lambda.empty()) {
        if (lambda.size() != k) throw DomainError("ansatz: one lambda per vortex required");
        for (double v : lambda)
            if (!(v > 0.0)) throw ConfigError("ansatz: nonpositive lambda, ansatz invalid at this eps");
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (!(norm(config.positions[i] - config.positions[j]) > 2.0 * delta))
                throw DomainError("ansatz: balls B_delta(b_j) overlap");
}

std::vector<double> lambda_solve(const AnsatzParams& p) {
    const double s = p.config.s, a = p.exponent();
    const std::size_t k = p.config.size();
    std::vector<double> lam(k);
    for (std::size_t l = 0; l < k; ++l) {
        const double mla = std::pow(p.mu[l], a);
        double bracket = p.c * mla * std::pow(p.eps, 2.0 - 2.0 * s) * p.config.positions[l].x;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == l) continue;
            const double r = norm(p.config.positions[l] - p.config.positions[j]) / (p.eps * p.mu[j]);
            bracket += p.sigma(j) * mla * std::pow(p.mu[j], -a) * evaluate_W(*p.profile, r);
        }
        lam[l] = (1.0 + p.sigma(l) * bracket) / mla;
        if (!(lam[l] > 0.0))
            throw ConfigError("lambda_solve: lambda_" + std::to_string(l + 1) +
                              " <= 0, ansatz invalid at this eps");
    }
    return lam;
}

AnsatzParams make_ansatz(const VortexConfig& config, double eps, double c, double delta,
                         std::shared_ptr<const RadialProfile> profile) {
    if (!profile) throw DomainError("make_ansatz: missing profile");
    AnsatzParams p;
    p.config = config;
    p.eps = eps;
    p.c = c;
    p.delta = delta;
    p.profile = std::move(profile);
    for (double m : config.intensities) p.mu.push_back(mu_from_mass(m, p.profile->params, p.profile->Mgamma));
    p.validate();
    p.lambda = lambda_solve(p);
    return p;
}

AnsatzParams pair_ansatz(double d, double m, double c, double eps, double delta,
                         std::shared_ptr<const RadialProfile> profile) {
    if (!(d > 0.0)) throw DomainError("pair_ansatz: d must be positive");
    if (!profile) throw DomainError("pair_ansatz: missing profile");
    VortexConfig cfg{{{d, 0.0}, {-d, 0.0}}, {m, -m}, profile->params.s};
    return make_ansatz(cfg, eps, c, delta, std::move(profile));
}

double build_psi0(Vec2 x, const AnsatzParams& p) {
    const double s = p.config.s, a = p.exponent();
    double sum = 0.0;
    for (std::size_t j = 0; j < p.config.size(); ++j) {
        const double r = norm(x - p.config.positions[j]) / (p.eps * p.mu[j]);
        sum += p.sigma(j) * std::pow(p.mu[j], -a) * evaluate_W(*p.profile, r);
    }
    return std::pow(p.eps, 2.0 * s - 2.0) * sum;
}

ErrorField error_field(const AnsatzParams& p, std::size_t l, int n, double radius_factor,
                       int threads) {
    p.validate();
    const std::size_t k = p.config.size();
    if (l >= k) throw DomainError("error_field: vortex index out of range");
    if (n < 3) throw DomainError("error_field: grid needs at least 3 points per side");
    if (!(radius_factor > 0.0)) throw DomainError("error_field: radius factor must be positive");
    const RadialProfile& W = *p.profile;
    const double s = p.config.s, g = W.params.gamma, a = p.exponent();
    const double scale = p.eps * p.mu[l];
    ErrorField f;
    f.vortex = l;
    f.radius = radius_factor * W.R0;
    if (!(f.radius < p.delta / scale))
        throw DomainError("error_field: grid leaves the ball B_{delta/(eps mu)}");

    const Vec2 bl = p.config.positions[l];
    const double mla = std::pow(p.mu[l], a);
    const double drift = p.c * mla * p.mu[l] * std::pow(p.eps, 3.0 - 2.0 * s);
    std::vector<double> base(k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
        if (j != l) base[j] = evaluate_W(W, norm(bl - p.config.positions[j]) / (p.eps * p.mu[j]));

    const double h = 2.0 * f.radius / (n - 1);
    std::vector<std::vector<std::pair<Vec2, double>>> rows(static_cast<std::size_t>(n));
    parallel_for(std::size_t(n), threads, [&](std::size_t i) {
        const double z2 = -f.radius + h * double(i);
        for (int jx = 0; jx < n; ++jx) {
            const Vec2 z{-f.radius + h * jx, z2};
            if (norm(z) > f.radius * (1.0 + 1e-12)) continue;
            const Vec2 x = bl + scale * z;
            double S = drift * z.x;
            for (std::size_t j = 0; j < k; ++j) {
                if (j == l) continue;
                const double wj = evaluate_W(W, norm(x - p.config.positions[j]) / (p.eps * p.mu[j]));
                S += p.sigma(j) * mla * std::pow(p.mu[j], -a) * (wj - base[j]);
            }
            S *= p.sigma(l);
            const double w = evaluate_W(W, norm(z)) - 1.0;
            const double e = (w > 0.0 ? std::pow(w, g) : 0.0) -
                             (w + S > 0.0 ? std::pow(w + S, g) : 0.0);
            rows[i].push_back({z, e});
        }
    });
    double num = 0.0, den = 0.0;
    for (const auto& row : rows)
        for (const auto& [z, e] : row) {
            f.points.push_back(z);
            f.values.push_back(e);
            f.sup_error = std::max(f.sup_error, std::abs(e));
            const double w = evaluate_W(W, norm(z)) - 1.0;
            const double basis = w > 0.0 ? -g * std::pow(w, g - 1.0) * z.x : 0.0;
            num += basis * e;
            den += basis * basis;
        }
    f.linear_coeff = den > 0.0 ? num / den : 0.0;
    return f;
}

void write_error_field_csv(std::ostream& out, const ErrorField& f) {
    out.precision(17);
    out << "y1,y2,E\n";
    for (std::size_t i = 0; i < f.points.size(); ++i)
        out << f.points[i].x << ',' << f.points[i].y << ',' << f.values[i] << '\n';
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit: need matching samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw DomainError("slope fit: non-positive value in log-log regression");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= double(x.size());
    my /= double(x.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (!(sxx > 1e-24)) throw DomainError("slope fit: degenerate abscissae");
    return sxy / sxx;
}

ErrorScalingReport scaling_study(std::span<const double> eps, const AnsatzParams& tmpl,
                                 int threads) {
    if (eps.size() < 4) throw DomainError("scaling_study: at least four eps values required");
    if (!tmpl.profile) throw DomainError("scaling_study: missing profile");
    for (std::size_t i = 0; i < eps.size(); ++i)
        for (std::size_t j = i + 1; j < eps.size(); ++j)
            if (eps[i] == eps[j]) throw DomainError("scaling_study: repeated eps value");
    ErrorScalingReport rep;
    rep.s = tmpl.profile->params.s;
    rep.gamma = tmpl.profile->params.gamma;
    if (tmpl.config.size() >= 2)
        rep.d = 0.5 * norm(tmpl.config.positions[0] - tmpl.config.positions[1]);
    rep.eps.assign(eps.begin(), eps.end());
    rep.sup_error.assign(eps.size(), 0.0);
    parallel_for(eps.size(), threads, [&](std::size_t i) {
        const AnsatzParams p = make_ansatz(tmpl.config, eps[i], tmpl.c, tmpl.delta, tmpl.profile);
        rep.sup_error[i] = error_field(p, 0, 201, 3.0, 1).sup_error;
    });
    rep.slope = loglog_slope(rep.eps, rep.sup_error);
    rep.predicted = 3.0 - 2.0 * rep.s;
    return rep;
}

double reduced_function(double d, double c, double m, double s) {
    if (!(d > 0.0)) throw DomainError("reduced_function: d must be positive");
    return std::pow(d, 2.0 * s - 3.0) + reduced_root(c, m, s).c1;
}

ReducedRoot reduced_root(double c, double m, double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("reduced_function: s outside (0, 1)");
    if (m == 0.0 || !std::isfinite(m)) throw DomainError("reduced_function: m must be nonzero");
    ReducedRoot r;
    r.c1 = (c / m) * 4.0 * kPi * gamma_fn(s) / gamma_fn(2.0 - s);
    r.has_root = r.c1 < 0.0;
    if (r.has_root) r.d_star = std::pow(-r.c1, -1.0 / (3.0 - 2.0 * s));
    return r;
}

Eigen::VectorXd balancing_residual_multi(std::span<const Vec2> p, std::span<const Vec2> q, double c,
                                         double s) {
    return balancing_residual(p, q, c, s);
}

}  // namespace sqg

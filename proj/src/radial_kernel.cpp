#include "sqglab/radial_kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "quadrature.hpp"
#include "sqglab/constants.hpp"
#include "sqglab/error.hpp"
#include "sqglab/parallel.hpp"

namespace sqg {

namespace detail {

const GaussRule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule rule;
    rule.x.resize(std::size_t(n));
    rule.w.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        rule.x[std::size_t(i)] = 0.5 * (1.0 - z);
        rule.w[std::size_t(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace detail

namespace {

constexpr double kSeriesMaxRatio = 0.75;

void check_args(double r, double rho, double s, int m) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("radial_mode_kernel: s outside (0, 1)");
    if (m < 0) throw DomainError("radial_mode_kernel: negative mode");
    if (!(r >= 0.0) || !(rho >= 0.0) || !std::isfinite(r) || !std::isfinite(rho))
        throw DomainError("radial_mode_kernel: radii must be finite and nonnegative");
    if (r == 0.0 && rho == 0.0) throw DomainError("radial_mode_kernel: r = rho = 0");
}

// 2 int_0^pi cos(m th) D^{-a}, D = (r-rho)^2 + 4 r rho sin^2(th/2), with panels graded at 0.
double angular_integral_panels(double r, double rho, double a, int m) {
    const auto& g = detail::gauss_legendre(16);
    const double d2 = (r - rho) * (r - rho);
    const double w = std::abs(r - rho) / std::sqrt(r * rho);
    std::vector<double> br{0.0};
    for (double b = w; b < kPi; b *= 2.0) br.push_back(b);
    br.push_back(kPi);
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
        const double lo = br[p], len = br[p + 1] - br[p];
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            const double th = lo + len * g.x[q];
            const double sn = std::sin(0.5 * th);
            const double D = d2 + 4.0 * r * rho * sn * sn;
            sum += len * g.w[q] * std::cos(m * th) * std::pow(D, -a);
        }
    }
    return 2.0 * sum;
}

// Diagonal value: 2 (2r)^{-2a} int_0^pi cos(m th) sin(th/2)^{-2a} dth, for 2a < 1.
double angular_integral_diagonal(double r, double a, int m) {
    const auto& g = detail::gauss_legendre(16);
    double sum = std::pow(2.0, 2.0 * a) * std::pow(kPi, 1.0 - 2.0 * a) / (1.0 - 2.0 * a);
    double hi = kPi;
    for (int level = 0; level < 48; ++level) {
        const double lo = 0.5 * hi, len = hi - lo;
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            const double th = lo + len * g.x[q];
            const double h = 0.5 * th;
            sum += len * g.w[q] *
                   (std::cos(m * th) * std::pow(std::sin(h), -2.0 * a) - std::pow(h, -2.0 * a));
        }
        hi = lo;
    }
    return 2.0 * std::pow(2.0 * r, -2.0 * a) * sum;
}

}  // namespace

double radial_mode_kernel_series(double r, double rho, double s, int m) {
    check_args(r, rho, s, m);
    const double a = 1.0 - s;
    const double R = std::max(r, rho);
    const double t = std::min(r, rho) / R;
    if (!(t < 1.0)) throw DomainError("radial_mode_kernel_series: requires r != rho");
    if (rho == 0.0) return 0.0;
    double pre = 1.0;
    for (int k = 0; k < m; ++k) pre *= (a + k) / (k + 1.0) * t;
    if (pre == 0.0) return 0.0;
    const double t2 = t * t;
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 100000; ++n) {
        term *= (a + n) * (a + m + n) / ((m + 1.0 + n) * (n + 1.0)) * t2;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return riesz_constant(2, s) * rho * 2.0 * kPi * pre * sum * std::pow(R, -2.0 * a);
}

double radial_mode_kernel(double r, double rho, double s, int m) {
    check_args(r, rho, s, m);
    if (rho == 0.0) return 0.0;
    const double a = 1.0 - s;
    if (r == rho) {
        if (s <= 0.5)
            throw SingularityError("radial_mode_kernel: diagonal value is infinite for s <= 1/2");
        return riesz_constant(2, s) * rho * angular_integral_diagonal(r, a, m);
    }
    const double t = std::min(r, rho) / std::max(r, rho);
    if (t <= kSeriesMaxRatio) return radial_mode_kernel_series(r, rho, s, m);
    const double v = riesz_constant(2, s) * rho * angular_integral_panels(r, rho, a, m);
    if (!std::isfinite(v)) throw SingularityError("radial_mode_kernel: non-finite value");
    return v;
}

double radial_mode_kernel_bruteforce(double r, double rho, double s, int m, int panels) {
    check_args(r, rho, s, m);
    const auto& g = detail::gauss_legendre(16);
    const double a = 1.0 - s, len = kPi / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p)
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            const double th = (p + g.x[q]) * len;
            sum += len * g.w[q] * std::cos(m * th) *
                   std::pow(r * r + rho * rho - 2.0 * r * rho * std::cos(th), -a);
        }
    return riesz_constant(2, s) * rho * 2.0 * sum;
}

namespace {

// Calls add(rho, K(x, rho) * weight) for a quadrature of int_cell K(x, rho) g(rho) drho.
template <class Add>
void integrate_cell(double x, double lo, double hi, double s, int m, Add&& add) {
    const double L = hi - lo;
    auto accumulate = [&](double rho, double wt) { add(rho, radial_mode_kernel(x, rho, s, m) * wt); };
    // rho = e + dir * len * v^p, clustered at e.
    auto graded = [&](double e, double dir, double len) {
        const int p = std::max(4, int(std::ceil(3.0 / (2.0 * s))));
        const auto& g = detail::gauss_legendre(20);
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            const double v = g.x[q];
            const double vp1 = std::pow(v, p - 1);
            accumulate(e + dir * len * vp1 * v, g.w[q] * len * p * vp1);
        }
    };
    if (x > lo && x < hi) {
        graded(x, -1.0, x - lo);
        graded(x, 1.0, hi - x);
        return;
    }
    const double dlo = std::abs(x - lo), dhi = std::abs(x - hi);
    if (std::min(dlo, dhi) < 2.0 * L) {
        if (dlo <= dhi)
            graded(lo, 1.0, L);
        else
            graded(hi, -1.0, L);
        return;
    }
    const auto& g = detail::gauss_legendre(10);
    for (std::size_t q = 0; q < g.x.size(); ++q) accumulate(lo + L * g.x[q], L * g.w[q]);
}

void check_nodes(std::span<const double> nodes, std::size_t columns) {
    if (nodes.size() < 2 || columns < 2 || columns > nodes.size())
        throw DomainError("product integration: need at least two nodes");
    if (nodes[0] < 0.0) throw DomainError("product integration: negative radius");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i + 1] > nodes[i]))
            throw DomainError("product integration: nodes must be strictly increasing");
}

}  // namespace

Stencil interpolation_stencil(std::span<const double> nodes, std::size_t columns,
                              Interpolation order, std::size_t cell, double rho) {
    Stencil st;
    if (order == Interpolation::linear || columns < 4) {
        const double lo = nodes[cell], hi = nodes[cell + 1];
        st.first = cell;
        st.count = 2;
        st.basis[0] = (hi - rho) / (hi - lo);
        st.basis[1] = (rho - lo) / (hi - lo);
        return st;
    }
    st.first = cell == 0 ? 0 : std::min(cell - 1, columns - 4);
    st.count = 4;
    for (std::size_t a = 0; a < 4; ++a) {
        double b = 1.0;
        for (std::size_t c = 0; c < 4; ++c)
            if (c != a)
                b *= (rho - nodes[st.first + c]) / (nodes[st.first + a] - nodes[st.first + c]);
        st.basis[a] = b;
    }
    return st;
}

Eigen::MatrixXd product_integration_matrix(std::span<const double> x, std::span<const double> nodes,
                                           std::size_t columns, double s, int m, int threads,
                                           Interpolation order) {
    check_nodes(nodes, columns);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(Eigen::Index(x.size()), Eigen::Index(columns));
    parallel_for(x.size(), threads, [&](std::size_t i) {
        for (std::size_t k = 0; k + 1 < columns; ++k)
            integrate_cell(x[i], nodes[k], nodes[k + 1], s, m, [&](double rho, double kw) {
                const Stencil st = interpolation_stencil(nodes, columns, order, k, rho);
                for (std::size_t a = 0; a < st.count; ++a)
                    W(Eigen::Index(i), Eigen::Index(st.first + a)) += kw * st.basis[a];
            });
    });
    return W;
}

double mode_potential(double r, std::span<const double> nodes, std::span<const double> values,
                      double s, int m, Interpolation order) {
    if (values.size() != nodes.size()) throw DomainError("mode_potential: size mismatch");
    check_nodes(nodes, nodes.size());
    if (!(r >= 0.0)) throw DomainError("mode_potential: negative radius");
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
        integrate_cell(r, nodes[k], nodes[k + 1], s, m, [&](double rho, double kw) {
            const Stencil st = interpolation_stencil(nodes, nodes.size(), order, k, rho);
            for (std::size_t a = 0; a < st.count; ++a) sum += kw * st.basis[a] * values[st.first + a];
        });
    return sum;
}

std::vector<double> radial_hat_moments(std::span<const double> nodes, Interpolation order) {
    check_nodes(nodes, nodes.size());
    std::vector<double> w(nodes.size(), 0.0);
    const auto& g = detail::gauss_legendre(4);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double lo = nodes[k], L = nodes[k + 1] - lo;
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            const double rho = lo + L * g.x[q];
            const Stencil st = interpolation_stencil(nodes, nodes.size(), order, k, rho);
            for (std::size_t a = 0; a < st.count; ++a) w[st.first + a] += L * g.w[q] * rho * st.basis[a];
        }
    }
    return w;
}

}  // namespace sqg

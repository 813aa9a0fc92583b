#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "sqglab/constants.hpp"

namespace sqg {

struct GridSpec {
    int N = 400;           ///< intervals; half inside the free boundary, half outside
    double R_max = 40.0;   ///< outer radius in units of R0
    double tol = 1e-9;     ///< sup-norm of the discrete residual
    int max_iter = 60;     ///< Newton iterations
    int threads = 0;       ///< kernel assembly workers, 0 = hardware concurrency
    void validate() const;
};

/// Radial ground state of (-Delta)^s W = (W-1)_+^gamma, W = G_s * (W-1)_+^gamma.
struct RadialProfile {
    std::vector<double> nodes;   ///< 0 = r_0 < ... < r_N = R_max (physical units)
    std::vector<double> values;  ///< W at the nodes
    std::vector<double> source;  ///< (W-1)_+^gamma at the nodes
    std::size_t boundary_index = 0;  ///< nodes[boundary_index] == R0
    double R0 = 0.0;
    double Mgamma = 0.0;     ///< int (W-1)_+^gamma over the plane
    double tail_coeff = 0.0; ///< fitted coefficient of r^{-(2-2s)} on the outer quarter of the grid
    double residual_norm = 0.0;
    int iterations = 0;
    FracParams params;

    double R_max() const { return nodes.back(); }
    double W0() const { return values.front(); }
};

/// Nodes on [0, R_max] with a node at 1 (index N/2): a sine-graded inner part clustered near 1
/// and a geometric outer part whose first step matches the last inner step.
std::vector<double> normalized_grid(int N, double R_max);

/// Solves on the normalized grid (free boundary pinned at 1) and maps back through the dilation
/// invariance.  Throws DomainError for inadmissible (s, gamma) and ConvergenceError if the
/// discrete residual cannot be brought below grid.tol.
RadialProfile solve_ground_state(const FracParams& params, const GridSpec& grid = {});

/// max_i |W_i - (G_s * (W-1)_+^gamma)(r_i)| recomputed from scratch on the profile grid.
double discrete_residual(const RadialProfile& profile, int threads = 0);

/// Monotone cubic (Fritsch-Carlson) interpolant for r <= R_max; beyond it
/// Mgamma c_{2,s} r^{2s-2} (1 + kappa (R_max/r)^2) with kappa fixed by continuity.
double evaluate_W(const RadialProfile& profile, double r);
double evaluate_dW(const RadialProfile& profile, double r);

/// W' at the nodes from local five-point Lagrange stencils (exactly 0 at r = 0).
std::vector<double> profile_derivative(const RadialProfile& profile);

/// Riesz potential of the interpolated discrete source at any r >= 0.
double potential_at(const RadialProfile& profile, double r);

struct TailSample {
    double r = 0.0;
    double ratio = 0.0;             ///< W r^{2-2s} / (Mgamma c_{2,s})
    double derivative_ratio = 0.0;  ///< -W' r^{3-2s} / ((2-2s) Mgamma c_{2,s})
};

struct PlasmaDiagnostics {
    double R0 = 0.0;      ///< root of W = 1 of the monotone interpolant
    double Mgamma = 0.0;
    std::vector<TailSample> tail;
};

/// Tail samples at r = f * R0 for each factor f, evaluated with potential_at.
PlasmaDiagnostics diagnostics(const RadialProfile& profile, std::span<const double> factors);

/// Residual of the dilated profile 1 + lambda^a (W(lambda x) - 1), a = 2s/(gamma-1), against
/// G_s * (. - 1)_+^gamma + (1 - lambda^a), on a freshly assembled grid r_i / lambda.
double dilation_residual(const RadialProfile& profile, double lambda, int threads = 0);

/// Columns r, W, source.
void write_profile_csv(std::ostream& out, const RadialProfile& profile);

}  // namespace sqg

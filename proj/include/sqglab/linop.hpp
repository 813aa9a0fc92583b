#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sqglab/plasma.hpp"

namespace sqg {

/// V = gamma (W - 1)_+^{gamma - 1} at the profile nodes.
std::vector<double> potential_V(const RadialProfile& profile);

/// Discretization of A_m[phi](r) = int K_m(r, rho) V(rho) phi(rho) drho on the nodes with V > 0.
/// With hat-function product weights K_ij and moments w_j = int rho phi_j, the kernel is
/// symmetrized as k_ij = (K_ij / w_j + K_ji / w_i) / 2 and A = k D, D = diag(w V), so that
/// D^{1/2} A D^{-1/2} is exactly symmetric.
struct ModeOperator {
    int mode = 0;
    std::vector<double> nodes;  ///< support nodes r_0 .. r_{n-1} (V > 0)
    Eigen::MatrixXd A;
    Eigen::VectorXd D;
};

ModeOperator mode_operator(const RadialProfile& profile, int mode, int threads = 0);

struct ModeSpectrumReport {
    int mode = 0;
    std::vector<double> eigenvalues;  ///< descending
    double distance_to_one = 0.0;     ///< min |lambda - 1|
    double nearest = 0.0;             ///< eigenvalue attaining it
    std::optional<double> eigvec_correlation;  ///< mode 1: cosine with -W' at the nodes
    double symmetry_defect = 0.0;     ///< max |S - S^T| of D^{1/2} A D^{-1/2}
    double min_entry = 0.0;           ///< smallest entry of A
    bool flagged = false;             ///< distance_to_one below the threshold
};

ModeSpectrumReport mode_spectrum(const RadialProfile& profile, int mode, int threads = 0,
                                 double threshold = 0.05);

/// One report per mode 0..max_mode.
std::vector<ModeSpectrumReport> nondegeneracy_report(const RadialProfile& profile, int max_mode,
                                                     int threads = 0, double threshold = 0.05);

/// The dilation mode z0 = a (W - 1) + r W' (a = 2s/(gamma-1)) satisfies z0 - A_0 z0 = -a on the
/// support; returns max |z0 - A_0 z0 + a| / a.
double dilation_mode_residual(const RadialProfile& profile, int threads = 0);

}  // namespace sqg

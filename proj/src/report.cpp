#include "sqglab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace sqg {

Json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    double r = std::strtod(buf, nullptr);
    if (r == 0.0) r = 0.0;  // drop negative zero
    return r;
}

Json nums(std::span<const double> xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

Json points(std::span<const Vec2> pts) {
    Json a = Json::array();
    for (const auto& p : pts) a.push_back(Json::array({num(p.x), num(p.y)}));
    return a;
}

Json to_json(const Certificate& cert, std::size_t max_spectrum) {
    Json j;
    j["operator"] = cert.operator_name;
    const std::size_t n = std::min(max_spectrum, cert.spectrum.size());
    j["spectrum"] = nums(std::span<const double>(cert.spectrum).first(n));
    j["spectrum_size"] = cert.spectrum.size();
    j["kernel_dimension"] = cert.kernel_dimension;
    j["kernel_tol"] = num(cert.kernel_tol);
    j["subspace_angle"] = num(cert.subspace_angle);
    j["matches_symmetry"] = cert.matches_symmetry;
    return j;
}

Json to_json(const EquilibriumSolution& sol) {
    Json j;
    j["s"] = num(sol.config.s);
    j["positions"] = points(sol.config.positions);
    j["intensities"] = nums(sol.config.intensities);
    j["motion"] = {{"type", sol.motion.kind == MotionKind::traveling ? "traveling" : "rotating"},
                   {"value", num(sol.motion.value)}};
    j["residual_norm"] = num(sol.residual_norm);
    if (sol.certificate) {
        j["spectrum"] = nums(sol.certificate->spectrum);
        j["kernel_dimension"] = sol.certificate->kernel_dimension;
    }
    return j;
}

Json to_json(const Motion2D& m) {
    return {{"drift_velocity", {num(m.drift_velocity.x), num(m.drift_velocity.y)}},
            {"rotation_rate", num(m.rotation_rate)}};
}

Json to_json(const InvariantDrift& d) {
    return {{"H_rel", num(d.H_rel)}, {"P_abs", num(d.P_abs)}, {"L_rel", num(d.L_rel)}};
}

Json to_json(const PlasmaDiagnostics& diag, const RadialProfile& p) {
    Json j;
    j["s"] = num(p.params.s);
    j["gamma"] = num(p.params.gamma);
    j["R0"] = num(diag.R0);
    j["Mgamma"] = num(diag.Mgamma);
    j["W0"] = num(p.W0());
    j["tail_coeff"] = num(p.tail_coeff);
    j["residual_norm"] = num(p.residual_norm);
    j["iterations"] = p.iterations;
    j["N"] = p.nodes.size() - 1;
    j["R_max"] = num(p.R_max());
    bool mono = true;
    for (std::size_t i = 1; i < p.values.size(); ++i) mono = mono && p.values[i] < p.values[i - 1];
    j["monotone"] = mono;
    Json tail = Json::array();
    for (const auto& t : diag.tail)
        tail.push_back({{"r_over_R0", num(t.r / diag.R0)},
                        {"r", num(t.r)},
                        {"ratio", num(t.ratio)},
                        {"derivative_ratio", num(t.derivative_ratio)}});
    j["tail_ratio_at"] = tail;
    return j;
}

Json to_json(const ModeSpectrumReport& r, std::size_t max_eigenvalues) {
    Json j;
    j["mode"] = r.mode;
    const std::size_t n = std::min(max_eigenvalues, r.eigenvalues.size());
    j["eigenvalues"] = nums(std::span<const double>(r.eigenvalues).first(n));
    j["distance_to_one"] = num(r.distance_to_one);
    j["nearest"] = num(r.nearest);
    j["eigvec_correlation"] = r.eigvec_correlation ? num(*r.eigvec_correlation) : Json(nullptr);
    j["symmetry_defect"] = num(r.symmetry_defect);
    j["flagged"] = r.flagged;
    return j;
}

Json to_json(const ErrorScalingReport& r) {
    return {{"s", num(r.s)},         {"gamma", num(r.gamma)},
            {"d", num(r.d)},         {"eps", nums(r.eps)},
            {"sup_error", nums(r.sup_error)}, {"slope", num(r.slope)},
            {"predicted", num(r.predicted)}};
}

}  // namespace sqg

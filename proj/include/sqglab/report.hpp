#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "sqglab/ansatz.hpp"
#include "sqglab/equilibria.hpp"
#include "sqglab/linop.hpp"
#include "sqglab/plasma.hpp"
#include "sqglab/point_vortex.hpp"

namespace sqg {

using Json = nlohmann::ordered_json;

/// x rounded to 9 significant digits (non-finite values become null).
Json num(double x);
Json nums(std::span<const double> xs);
Json points(std::span<const Vec2> pts);

Json to_json(const Certificate& cert, std::size_t max_spectrum = 16);
/// {s, gamma?, positions, intensities, motion:{type, value}, residual_norm, spectrum, kernel_dimension}
Json to_json(const EquilibriumSolution& sol);
Json to_json(const Motion2D& motion);
Json to_json(const InvariantDrift& drift);
Json to_json(const PlasmaDiagnostics& diag, const RadialProfile& profile);
Json to_json(const ModeSpectrumReport& rep, std::size_t max_eigenvalues = 8);
Json to_json(const ErrorScalingReport& rep);

}  // namespace sqg

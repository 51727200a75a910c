#pragma once

#include <cmath>
#include <numbers>

namespace triple_lab {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_e = std::numbers::e;

/// csc(2π/3) = √(4/3). Computed from the cosecant so callers can check it
/// against the closed form.
inline double triple_constant() { return 1.0 / std::sin(2.0 * pi / 3.0); }

inline const double tau = triple_constant();

// Lower bounds, all in units carrying the appropriate power of hbar.
inline double pair_bound(double hbar = 1.0) { return hbar / 2.0; }
inline double triple_bound(double hbar = 1.0) { return std::pow(tau * hbar / 2.0, 1.5); }
inline double pair_implied_triple_bound(double hbar = 1.0) { return std::pow(hbar / 2.0, 1.5); }
inline double additive_bound(double hbar = 1.0) { return 1.5 * tau * hbar; }

/// Triple product of any coherent state, √2 (ħ/2)^{3/2}.
inline double coherent_triple(double hbar = 1.0) { return std::sqrt(2.0) * pair_implied_triple_bound(hbar); }

/// Conjectured entropic bound (3/2) ln(τeπ) for S_q + S_p + S_r.
inline double entropy_bound() { return 1.5 * std::log(tau * euler_e * pi); }

/// What pairwise entropic bounds ln(eπ) imply for the triple: (3/2) ln(eπ).
inline double pair_implied_entropy_bound() { return 1.5 * std::log(euler_e * pi); }

}  // namespace triple_lab

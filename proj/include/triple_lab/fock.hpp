#pragma once

// Truncated number-basis engine. Operators are dense N×N complex matrices in
// the basis |0⟩..|N-1⟩. Quadratic observables (q², p², r², qp + pq) carry the
// exact matrix elements of the infinite-dimensional operators restricted to
// the span, so ⟨ψ|X²|ψ⟩ is exact for every truncated state.
//
// Identities that only hold in infinite dimensions are checked on interior
// blocks (n ≤ N/4 unless stated otherwise), and operator or state
// comparisons are made after optimal global-phase alignment.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "triple_lab/constants.hpp"
#include "triple_lab/hermite.hpp"

namespace triple_lab {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr cplx imag_unit{0.0, 1.0};

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

/// Observable X together with the matrix used for ⟨X²⟩.
struct Observable {
  ComplexMatrix x;
  ComplexMatrix x2;

  /// Uses the truncated product X·X, for operators without an exact square.
  static Observable from_matrix(const ComplexMatrix& m) { return {m, m * m}; }
};

struct OperatorSet {
  int dim = 0;
  double hbar = 1.0;
  ComplexMatrix a, adag, q, p, r, n;
  ComplexMatrix q2, p2, r2;
  ComplexMatrix qp_sym;  // (qp + pq)/2

  Observable obs_q() const { return {q, q2}; }
  Observable obs_p() const { return {p, p2}; }
  Observable obs_r() const { return {r, r2}; }
  ComplexMatrix identity() const { return ComplexMatrix::Identity(dim, dim); }
};

inline OperatorSet build_operators(int dim, double hbar = 1.0) {
  if (dim < 8) throw std::invalid_argument("build_operators: truncation must be at least 8");
  if (!(hbar > 0.0)) throw std::invalid_argument("build_operators: hbar must be positive");
  OperatorSet ops;
  ops.dim = dim;
  ops.hbar = hbar;
  ops.a = ComplexMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) ops.a(k - 1, k) = std::sqrt(static_cast<double>(k));
  ops.adag = ops.a.adjoint();
  ops.n = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) ops.n(k, k) = k;

  const double s = std::sqrt(hbar / 2.0);
  ops.q = s * (ops.a + ops.adag);
  ops.p = -imag_unit * s * (ops.a - ops.adag);
  ops.r = -ops.q - ops.p;

  // a lowers, so a·a is already exact on the span.
  const ComplexMatrix a2 = ops.a * ops.a;
  const ComplexMatrix a2dag = a2.adjoint();
  const ComplexMatrix number_term = 2.0 * ops.n + ops.identity();
  ops.q2 = 0.5 * hbar * (a2 + a2dag + number_term);
  ops.p2 = 0.5 * hbar * (number_term - a2 - a2dag);
  ops.qp_sym = 0.5 * imag_unit * hbar * (a2dag - a2);
  ops.r2 = ops.q2 + ops.p2 + 2.0 * ops.qp_sym;
  return ops;
}

class FockVector {
 public:
  explicit FockVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0 || !amplitudes_.allFinite())
      throw std::invalid_argument("FockVector: empty or non-finite amplitudes");
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) throw std::invalid_argument("FockVector: not normalized");
  }

  static FockVector normalized(ComplexVector v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("FockVector: zero or non-finite vector");
    v /= norm;
    return FockVector(std::move(v));
  }

  static FockVector number(int n, int dim) {
    if (n < 0 || n >= dim) throw std::invalid_argument("FockVector::number: level outside truncation");
    ComplexVector v = ComplexVector::Zero(dim);
    v(n) = 1.0;
    return FockVector(std::move(v));
  }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }

 private:
  ComplexVector amplitudes_;
};

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix u) : u_(std::move(u)) {
    if (u_.rows() != u_.cols()) throw std::invalid_argument("UnitaryMatrix: not square");
    const ComplexMatrix defect = u_.adjoint() * u_ - ComplexMatrix::Identity(u_.rows(), u_.cols());
    if (max_abs(defect) > 1e-9) throw std::invalid_argument("UnitaryMatrix: U†U != 1");
  }

  const ComplexMatrix& matrix() const { return u_; }
  int dim() const { return static_cast<int>(u_.rows()); }
  UnitaryMatrix adjoint() const { return UnitaryMatrix(u_.adjoint()); }

  FockVector apply(const FockVector& v) const { return FockVector::normalized(u_ * v.amplitudes()); }

  /// U X U†.
  ComplexMatrix conjugate(const ComplexMatrix& x) const { return u_ * x * u_.adjoint(); }

  friend UnitaryMatrix operator*(const UnitaryMatrix& lhs, const UnitaryMatrix& rhs) {
    return UnitaryMatrix(lhs.u_ * rhs.u_);
  }

 private:
  ComplexMatrix u_;
};

/// exp(i·scale·H) for Hermitian H, via its eigendecomposition.
inline UnitaryMatrix unitary_from_generator(const ComplexMatrix& h, double scale) {
  if (h.rows() != h.cols()) throw std::invalid_argument("unitary_from_generator: generator not square");
  if (hermiticity_defect(h) > 1e-10 * std::max(1.0, max_abs(h)))
    throw std::invalid_argument("unitary_from_generator: generator not Hermitian");
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym);
  if (eig.info() != Eigen::Success) throw std::runtime_error("unitary_from_generator: eigensolver failed");
  ComplexVector phases(sym.rows());
  for (Eigen::Index k = 0; k < sym.rows(); ++k) phases(k) = std::polar(1.0, scale * eig.eigenvalues()(k));
  return UnitaryMatrix(eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint());
}

// Named unitaries. Each mirrors the SymplecticTransform of the same name.

/// T_α = exp[i(p0 q - q0 p)/ħ], α = (q0 + i p0)/√(2ħ).
inline UnitaryMatrix translation_unitary(const OperatorSet& ops, cplx alpha) {
  const double s = std::sqrt(2.0 * ops.hbar);
  const double q0 = s * alpha.real();
  const double p0 = s * alpha.imag();
  return unitary_from_generator((p0 * ops.q - q0 * ops.p) / ops.hbar, 1.0);
}

/// G_b = exp(i b p²/2ħ).
inline UnitaryMatrix gauge_unitary(const OperatorSet& ops, double b) {
  return unitary_from_generator(ops.p2 / (2.0 * ops.hbar), b);
}

/// S_γ = exp[iγ(qp + pq)/2ħ].
inline UnitaryMatrix squeeze_unitary(const OperatorSet& ops, double gamma) {
  return unitary_from_generator(ops.qp_sym / ops.hbar, gamma);
}

/// S_ξ = exp[(ξ̄a² - ξa†²)/2], ξ = γ e^{iθ}.
inline UnitaryMatrix general_squeeze_unitary(const OperatorSet& ops, double gamma, double theta) {
  const cplx xi = std::polar(gamma, theta);
  const ComplexMatrix a2 = ops.a * ops.a;
  const ComplexMatrix anti = 0.5 * (std::conj(xi) * a2 - xi * a2.adjoint());
  return unitary_from_generator(-imag_unit * anti, 1.0);
}

/// R_φ = exp(-iφ a†a); diagonal, built directly.
inline UnitaryMatrix rotation_unitary(const OperatorSet& ops, double phi) {
  ComplexVector d(ops.dim);
  for (int k = 0; k < ops.dim; ++k) d(k) = std::polar(1.0, -phi * k);
  return UnitaryMatrix(d.asDiagonal().toDenseMatrix());
}

/// T_α G_{1/2} S_{½ln τ}: maps |n⟩ to the extremal state |n;α⟩.
inline UnitaryMatrix extremal_transform(const OperatorSet& ops, cplx alpha = {}) {
  return translation_unitary(ops, alpha) * gauge_unitary(ops, 0.5) * squeeze_unitary(ops, 0.5 * std::log(tau));
}

/// Phase c (|c| = 1) maximizing |tr(c B† A)|-alignment, then max |A - cB|.
inline double aligned_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx c = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  return max_abs(a - c * b);
}

inline double aligned_difference(const ComplexVector& a, const ComplexVector& b) {
  const cplx overlap = b.dot(a);
  const cplx c = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  return (a - c * b).cwiseAbs().maxCoeff();
}

inline ComplexMatrix interior(const ComplexMatrix& m, int levels) { return m.topLeftCorner(levels, levels); }

/// Number of basis states n ≤ dim/4.
inline int quarter_interior(int dim) { return dim / 4 + 1; }

// ---------------------------------------------------------------------------
// States and moments

struct ExtremalState {
  FockVector state;
  double norm_deficit;  // 1 - ‖truncated image‖² before renormalization
};

/// Truncated images of |n;α⟩ for n in [0, count), computed in a 2N padded
/// space and cut back to N.
inline std::vector<ExtremalState> build_extremal_states(int count, cplx alpha, int dim, double hbar = 1.0) {
  if (dim < 8) throw std::invalid_argument("build_extremal_state: truncation must be at least 8");
  if (count < 1 || count - 1 > dim / 4) throw std::invalid_argument("build_extremal_state: n too large for truncation");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw std::invalid_argument("build_extremal_state: non-finite displacement");
  const OperatorSet padded = build_operators(2 * dim, hbar);
  const UnitaryMatrix u = extremal_transform(padded, alpha);
  std::vector<ExtremalState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    ComplexVector v = u.matrix().col(n).head(dim);
    const double kept = v.squaredNorm();
    out.push_back({FockVector::normalized(std::move(v)), 1.0 - kept});
  }
  return out;
}

inline ExtremalState build_extremal_state(int n, cplx alpha, int dim, double hbar = 1.0) {
  if (n < 0 || n > dim / 4) throw std::invalid_argument("build_extremal_state: n too large for truncation");
  return build_extremal_states(n + 1, alpha, dim, hbar).back();
}

struct Moments {
  double mean;
  double variance;
};

inline Moments moments(const FockVector& state, const Observable& op) {
  if (op.x.rows() != state.dim() || op.x2.rows() != state.dim())
    throw std::invalid_argument("moments: dimension mismatch");
  if (hermiticity_defect(op.x) > 1e-10 * std::max(1.0, max_abs(op.x)))
    throw std::invalid_argument("moments: operator not Hermitian");
  const ComplexVector& psi = state.amplitudes();
  const cplx mean = psi.dot(op.x * psi);
  const cplx second = psi.dot(op.x2 * psi);
  return {mean.real(), second.real() - mean.real() * mean.real()};
}

inline Moments moments(const FockVector& state, const ComplexMatrix& op) {
  return moments(state, Observable::from_matrix(op));
}

/// Covariance (σ_qq, σ_qp, σ_pp) and means of q, p in a Fock state.
struct FockCovariance {
  double mean_q, mean_p;
  double qq, qp, pp;
};

inline FockCovariance covariance(const FockVector& state, const OperatorSet& ops) {
  const ComplexVector& psi = state.amplitudes();
  const Moments mq = moments(state, ops.obs_q());
  const Moments mp = moments(state, ops.obs_p());
  const double sym = psi.dot(ops.qp_sym * psi).real();
  return {mq.mean, mp.mean, mq.variance, sym - mq.mean * mp.mean, mp.variance};
}

/// ‖⅓ Σ_x (x - ⟨x⟩)²/Δx² ψ - ψ‖ over x = q, p, r with self-consistent moments.
inline double stationarity_residual(const FockVector& state, const OperatorSet& ops) {
  if (state.dim() != ops.dim) throw std::invalid_argument("stationarity_residual: dimension mismatch");
  const ComplexVector& psi = state.amplitudes();
  ComplexVector acc = ComplexVector::Zero(ops.dim);
  for (const Observable& obs : {ops.obs_q(), ops.obs_p(), ops.obs_r()}) {
    const Moments m = moments(state, obs);
    if (!(m.variance > 1e-14)) throw std::domain_error("stationarity_residual: degenerate variance");
    const ComplexVector centred_sq = obs.x2 * psi - 2.0 * m.mean * (obs.x * psi) + m.mean * m.mean * psi;
    acc += centred_sq / m.variance;
  }
  return (acc / 3.0 - psi).norm();
}

// ---------------------------------------------------------------------------
// Threefold symmetry

struct CycleOperator {
  UnitaryMatrix z;                // exp(-iq²/2ħ) exp(-iπ(p² + q²)/4ħ)
  UnitaryMatrix z_single;         // exp(-iπ(p² + q² + r²)/(3√3 ħ))
  double form_agreement;          // phase-aligned max-abs difference, n ≤ N/4
};

inline UnitaryMatrix modular_a(const OperatorSet& ops) { return unitary_from_generator(ops.q2 / (2.0 * ops.hbar), -1.0); }

inline UnitaryMatrix modular_b(const OperatorSet& ops) {
  return unitary_from_generator((ops.p2 + ops.q2) / (4.0 * ops.hbar), -pi);
}

inline CycleOperator cycle_operator(int dim, double hbar = 1.0) {
  if (dim < 32) throw std::invalid_argument("cycle_operator: truncation must be at least 32");
  const OperatorSet ops = build_operators(dim, hbar);
  UnitaryMatrix z = modular_a(ops) * modular_b(ops);
  UnitaryMatrix single =
      unitary_from_generator((ops.p2 + ops.q2 + ops.r2) / ops.hbar, -pi / (3.0 * std::sqrt(3.0)));
  const int k = quarter_interior(dim);
  const double agreement = aligned_difference(interior(z.matrix(), k), interior(single.matrix(), k));
  return {std::move(z), std::move(single), agreement};
}

struct ModularReport {
  double phase_a = 0.0;                  // arguments of the scalar phases
  double phase_b = 0.0;
  double b_squared_residual = 0.0;       // ‖P(c_B² B² - 1)P‖, optimal phase
  double ab_cubed_residual = 0.0;        // ‖P((c_A c_B)³ (AB)³ - 1)P‖, optimal phases
  double b_squared_spread = 0.0;         // eigenvalue spread of P B² P, unit phases
  double ab_cubed_spread = 0.0;          // eigenvalue spread of P (AB)³ P, unit phases
  double b_squared_projective_residual = 0.0;  // ‖P(B² x B²† + x)P‖ for x = q, p
  double b_squared_even_residual = 0.0;  // B² residual on the even-parity interior
};

namespace detail {

/// max|e^{iω} X - 1| minimized over ω: coarse grid then golden section to 1e-8.
inline std::pair<double, double> best_phase(const ComplexMatrix& x) {
  const ComplexMatrix id = ComplexMatrix::Identity(x.rows(), x.cols());
  auto residual = [&](double w) { return max_abs(std::polar(1.0, w) * x - id); };
  constexpr int coarse = 3600;
  const double h = 2.0 * pi / coarse;
  int best = 0;
  double best_val = residual(0.0);
  for (int i = 1; i < coarse; ++i) {
    const double v = residual(i * h);
    if (v < best_val) best_val = v, best = i;
  }
  double lo = (best - 1) * h;
  double hi = (best + 1) * h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = residual(x1);
  double f2 = residual(x2);
  while (hi - lo > 1e-8) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = residual(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = residual(x2);
    }
  }
  const double w = 0.5 * (lo + hi);
  return {w, residual(w)};
}

inline double eigenvalue_spread(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<ComplexMatrix> eig(m, false);
  const ComplexVector& ev = eig.eigenvalues();
  double spread = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    for (Eigen::Index j = i + 1; j < ev.size(); ++j) spread = std::max(spread, std::abs(ev(i) - ev(j)));
  return spread;
}

}  // namespace detail

/// Relations B² = 1 and (AB)³ = 1 for A = c_A exp(-iq²/2ħ),
/// B = c_B exp(-iπ(p² + q²)/4ħ), checked on n ≤ N/4.
inline ModularReport modular_check(int dim, double hbar = 1.0) {
  if (dim < 64) throw std::invalid_argument("modular_check: truncation must be at least 64");
  const OperatorSet ops = build_operators(dim, hbar);
  const ComplexMatrix a = modular_a(ops).matrix();
  const ComplexMatrix b = modular_b(ops).matrix();
  const ComplexMatrix b2 = b * b;
  const ComplexMatrix ab = a * b;
  const ComplexMatrix ab3 = ab * ab * ab;
  const int k = quarter_interior(dim);

  ModularReport rep;
  // c_B² multiplies B²; (c_A c_B)³ multiplies (AB)³.
  const auto [w_b, res_b] = detail::best_phase(interior(b2, k));
  const auto [w_ab, res_ab] = detail::best_phase(interior(ab3, k));
  rep.phase_b = w_b / 2.0;
  rep.phase_a = w_ab / 3.0 - rep.phase_b;
  rep.b_squared_residual = res_b;
  rep.ab_cubed_residual = res_ab;
  rep.b_squared_spread = detail::eigenvalue_spread(interior(b2, k));
  rep.ab_cubed_spread = detail::eigenvalue_spread(interior(ab3, k));
  rep.b_squared_projective_residual =
      std::max(max_abs(interior(b2 * ops.q * b2.adjoint() + ops.q, k)),
               max_abs(interior(b2 * ops.p * b2.adjoint() + ops.p, k)));

  const int evens = (k + 1) / 2;
  ComplexMatrix even(evens, evens);
  for (int i = 0; i < evens; ++i)
    for (int j = 0; j < evens; ++j) even(i, j) = b2(2 * i, 2 * j);
  rep.b_squared_even_residual = detail::best_phase(even).second;
  return rep;
}

// ---------------------------------------------------------------------------
// Operator identity G_b S_γ = S_ξ R_φ

struct BchParameters {
  double b = 0.5;
  double gamma = 0.5 * std::log(tau);
  double xi_magnitude = 0.25 * std::log(3.0);
  double xi_phase = pi / 2.0;
  double phi = -pi / 12.0;
};

inline std::pair<UnitaryMatrix, UnitaryMatrix> bch_sides(const OperatorSet& ops, const BchParameters& params = {}) {
  return {gauge_unitary(ops, params.b) * squeeze_unitary(ops, params.gamma),
          general_squeeze_unitary(ops, params.xi_magnitude, params.xi_phase) * rotation_unitary(ops, params.phi)};
}

/// Phase-aligned max-abs difference of the two sides on columns n ≤ N/4.
inline double verify_bch_identity(int dim, const BchParameters& params = {}, double hbar = 1.0) {
  if (dim < 64) throw std::invalid_argument("verify_bch_identity: truncation must be at least 64");
  const OperatorSet ops = build_operators(dim, hbar);
  const auto [lhs, rhs] = bch_sides(ops, params);
  const int k = quarter_interior(dim);
  return aligned_difference(ComplexMatrix(lhs.matrix().leftCols(k)), ComplexMatrix(rhs.matrix().leftCols(k)));
}

// ---------------------------------------------------------------------------
// Completeness of the extremal family

struct ResolutionReport {
  double deficit;          // ‖P - Π_K P‖₂
  double orthonormality;   // max |⟨m;α|n;α⟩ - δ_mn|, m, n < K
};

/// Π_K = Σ_{n<K} |n;α⟩⟨n;α|; P projects onto T_α span{|m⟩ : m < max(1, K/4)}.
inline ResolutionReport resolution_check(cplx alpha, int dim, int count, double hbar = 1.0) {
  if (count < 1 || count > dim / 4) throw std::invalid_argument("resolution_check: K too large for truncation");
  const auto states = build_extremal_states(count, alpha, dim, hbar);
  ComplexMatrix basis(dim, count);
  for (int n = 0; n < count; ++n) basis.col(n) = states[static_cast<std::size_t>(n)].state.amplitudes();

  const ComplexMatrix gram = basis.adjoint() * basis;
  const double ortho = max_abs(gram - ComplexMatrix::Identity(count, count));

  const int probe = std::max(1, count / 4);
  const OperatorSet padded = build_operators(2 * dim, hbar);
  const ComplexMatrix shifted = translation_unitary(padded, alpha).matrix().leftCols(probe).topRows(dim);
  const ComplexMatrix probe_basis = Eigen::HouseholderQR<ComplexMatrix>(shifted).householderQ() *
                                    ComplexMatrix::Identity(dim, probe);
  const ComplexMatrix remainder = probe_basis - basis * (basis.adjoint() * probe_basis);
  Eigen::JacobiSVD<ComplexMatrix> svd(remainder);
  return {svd.singularValues()(0), ortho};
}

// ---------------------------------------------------------------------------
// Position representation

/// ⟨q|Ξ₀⟩ = (τπħ)^{-1/4} exp(-½ e^{iπ/6} q²/ħ), the wavefunction of
/// G_{1/2} S_{½ln τ}|0⟩ (σ_qp = -τħ/4).
inline cplx xi_wavefunction(double q, double hbar = 1.0) {
  return std::pow(tau * pi * hbar, -0.25) * std::exp(-0.5 * std::polar(1.0, pi / 6.0) * q * q / hbar);
}

/// Max-abs difference between the Hermite synthesis of `state` and
/// `reference` on a grid, after global-phase alignment.
inline double wavefunction_residual(const FockVector& state, const std::function<cplx(double)>& reference,
                                    double x_min, double x_max, double step, double hbar = 1.0) {
  const HermiteTable table(x_min, x_max, step, state.dim() - 1, hbar);
  const ComplexVector synth = table.wavefunction(state.amplitudes());
  ComplexVector ref(table.size());
  for (Eigen::Index i = 0; i < table.size(); ++i) ref(i) = reference(table.x(i));
  return aligned_difference(synth, ref);
}

}  // namespace triple_lab

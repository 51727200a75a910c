#pragma once

// Closed-form engine for single-mode pure Gaussian states.
//
// Conventions: [q, p] = iħ, a = (q + ip)/√(2ħ), r = -q - p. A transform stores
// the Heisenberg-picture action U† ξ U = S ξ + d on ξ = (q, p), so the state
// U|ψ⟩ has mean S·mean + d and covariance S σ Sᵀ. The product U1·U2 of two
// transforms maps to S1·S2.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "triple_lab/constants.hpp"

namespace triple_lab {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Observable c_q q + c_p p.
struct Direction {
  double cq;
  double cp;

  Direction(double q, double p) : cq(q), cp(p) {
    if (!std::isfinite(q) || !std::isfinite(p))
      throw std::invalid_argument("Direction: non-finite coefficient");
    if (q == 0.0 && p == 0.0) throw std::invalid_argument("Direction: zero vector");
  }

  static Direction position() { return {1.0, 0.0}; }
  static Direction momentum() { return {0.0, 1.0}; }
  static Direction third() { return {-1.0, -1.0}; }
  /// Homodyne quadrature x(θ) = q cos θ + p sin θ.
  static Direction quadrature(double theta) { return {std::cos(theta), std::sin(theta)}; }

  Vec2 vector() const { return {cq, cp}; }
};

class GaussianState {
 public:
  GaussianState(const Vec2& mean, const Mat2& cov, double hbar = 1.0) : mean_(mean), hbar_(hbar) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("GaussianState: hbar must be positive");
    if (!mean.allFinite() || !cov.allFinite()) throw std::invalid_argument("GaussianState: non-finite entries");
    const double scale = cov.cwiseAbs().maxCoeff();
    if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-12 * std::max(1.0, scale))
      throw std::invalid_argument("GaussianState: covariance not symmetric");
    cov_ = 0.5 * (cov + cov.transpose());
    if (!(cov_(0, 0) > 0.0) || !(cov_.determinant() > 0.0))
      throw std::invalid_argument("GaussianState: covariance not positive definite");
    const double floor = 0.25 * hbar * hbar;
    if (cov_.determinant() < floor * (1.0 - 1e-8))
      throw std::invalid_argument("GaussianState: violates det σ ≥ (ħ/2)²");
  }

  const Vec2& mean() const { return mean_; }
  const Mat2& cov() const { return cov_; }
  double hbar() const { return hbar_; }

  /// det σ / (ħ/2)² - 1; zero for pure states.
  double purity_defect() const { return cov_.determinant() / (0.25 * hbar_ * hbar_) - 1.0; }

 private:
  Vec2 mean_;
  Mat2 cov_;
  double hbar_;
};

enum class TransformKind { translation, gauge, squeeze, general_squeeze, rotation };

inline TransformKind parse_transform_kind(std::string_view name) {
  if (name == "translation") return TransformKind::translation;
  if (name == "gauge") return TransformKind::gauge;
  if (name == "squeeze") return TransformKind::squeeze;
  if (name == "general_squeeze") return TransformKind::general_squeeze;
  if (name == "rotation") return TransformKind::rotation;
  throw std::invalid_argument("unknown transform kind: " + std::string(name));
}

class SymplecticTransform {
 public:
  explicit SymplecticTransform(const Mat2& matrix, const Vec2& displacement = Vec2::Zero())
      : matrix_(matrix), displacement_(displacement) {
    if (!matrix.allFinite() || !displacement.allFinite())
      throw std::invalid_argument("SymplecticTransform: non-finite entries");
    const double scale = std::max(1.0, matrix.squaredNorm());
    if (std::abs(matrix.determinant() - 1.0) > 1e-12 * scale)
      throw std::invalid_argument("SymplecticTransform: det S != 1");
  }

  static SymplecticTransform identity() { return SymplecticTransform(Mat2::Identity()); }

  /// T_α = exp[i(p0 q - q0 p)/ħ] with α = (q0 + i p0)/√(2ħ).
  static SymplecticTransform translation(std::complex<double> alpha, double hbar = 1.0) {
    require_finite(alpha.real());
    require_finite(alpha.imag());
    const double s = std::sqrt(2.0 * hbar);
    return SymplecticTransform(Mat2::Identity(), Vec2(s * alpha.real(), s * alpha.imag()));
  }

  /// G_b = exp(i b p²/2ħ): shear q -> q - b p.
  static SymplecticTransform gauge(double b) {
    require_finite(b);
    Mat2 m;
    m << 1.0, -b, 0.0, 1.0;
    return SymplecticTransform(m);
  }

  /// S_γ = exp[iγ(qp + pq)/2ħ]: q -> e^{-γ} q, p -> e^{γ} p.
  static SymplecticTransform squeeze(double gamma) {
    require_finite(gamma);
    Mat2 m;
    m << std::exp(-gamma), 0.0, 0.0, std::exp(gamma);
    return SymplecticTransform(m);
  }

  /// S_ξ = exp[(ξ̄a² - ξa†²)/2], ξ = γ e^{iθ}: contracts along the line at
  /// inclination θ/2 by e^{-γ}.
  static SymplecticTransform general_squeeze(double gamma, double theta) {
    require_finite(gamma);
    require_finite(theta);
    const double c = std::cosh(gamma);
    const double s = std::sinh(gamma);
    Mat2 m;
    m << c - s * std::cos(theta), -s * std::sin(theta), -s * std::sin(theta), c + s * std::cos(theta);
    return SymplecticTransform(m);
  }

  /// R_φ = exp(-iφ a†a): turns the observables counterclockwise,
  /// R q R† = q cos φ - p sin φ, hence the Wigner function clockwise.
  static SymplecticTransform rotation(double phi) {
    require_finite(phi);
    Mat2 m;
    m << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    return SymplecticTransform(m);
  }

  const Mat2& matrix() const { return matrix_; }
  const Vec2& displacement() const { return displacement_; }

  /// Operator product: (lhs * rhs) applies rhs to the state first.
  friend SymplecticTransform operator*(const SymplecticTransform& lhs, const SymplecticTransform& rhs) {
    return SymplecticTransform(lhs.matrix_ * rhs.matrix_, lhs.matrix_ * rhs.displacement_ + lhs.displacement_);
  }

 private:
  static void require_finite(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("SymplecticTransform: non-finite parameter");
  }

  Mat2 matrix_;
  Vec2 displacement_;
};

/// Parameter layout: translation (Re α, Im α); gauge (b); squeeze (γ);
/// general_squeeze (γ, θ); rotation (φ).
inline SymplecticTransform build_transform(TransformKind kind, std::span<const double> params, double hbar = 1.0) {
  auto need = [&](std::size_t n) {
    if (params.size() != n) throw std::invalid_argument("build_transform: wrong parameter count");
  };
  switch (kind) {
    case TransformKind::translation:
      need(2);
      return SymplecticTransform::translation({params[0], params[1]}, hbar);
    case TransformKind::gauge:
      need(1);
      return SymplecticTransform::gauge(params[0]);
    case TransformKind::squeeze:
      need(1);
      return SymplecticTransform::squeeze(params[0]);
    case TransformKind::general_squeeze:
      need(2);
      return SymplecticTransform::general_squeeze(params[0], params[1]);
    case TransformKind::rotation:
      need(1);
      return SymplecticTransform::rotation(params[0]);
  }
  throw std::invalid_argument("build_transform: unknown kind");
}

inline GaussianState vacuum_state(double hbar = 1.0) {
  if (!(hbar > 0.0)) throw std::invalid_argument("vacuum_state: hbar must be positive");
  return GaussianState(Vec2::Zero(), 0.5 * hbar * Mat2::Identity(), hbar);
}

inline GaussianState apply_transform(const GaussianState& state, const SymplecticTransform& t) {
  const Mat2& s = t.matrix();
  return GaussianState(s * state.mean() + t.displacement(), s * state.cov() * s.transpose(), state.hbar());
}

inline double variance_along(const GaussianState& state, const Direction& dir) {
  const Vec2 v = dir.vector();
  return v.dot(state.cov() * v);
}

inline double mean_along(const GaussianState& state, const Direction& dir) { return dir.vector().dot(state.mean()); }

struct TripleMargins {
  double pair_qp;   // pair_qp - ħ/2
  double pair_qr;
  double pair_rp;
  double triple;    // triple_product - (τħ/2)^{3/2}
  double pair_implied;  // triple_product - (ħ/2)^{3/2}
  double additive;  // additive_sum - 3τħ/2
};

struct TripleReport {
  double dq;
  double dp;
  double dr;
  double pair_qp;
  double pair_qr;
  double pair_rp;
  double triple_product;
  double additive_sum;
  TripleMargins margins;
};

inline TripleReport make_triple_report(double var_q, double var_p, double var_r, double hbar) {
  TripleReport rep{};
  rep.dq = std::sqrt(var_q);
  rep.dp = std::sqrt(var_p);
  rep.dr = std::sqrt(var_r);
  rep.pair_qp = rep.dq * rep.dp;
  rep.pair_qr = rep.dq * rep.dr;
  rep.pair_rp = rep.dr * rep.dp;
  rep.triple_product = rep.dq * rep.dp * rep.dr;
  rep.additive_sum = var_q + var_p + var_r;
  rep.margins = {rep.pair_qp - pair_bound(hbar),
                 rep.pair_qr - pair_bound(hbar),
                 rep.pair_rp - pair_bound(hbar),
                 rep.triple_product - triple_bound(hbar),
                 rep.triple_product - pair_implied_triple_bound(hbar),
                 rep.additive_sum - additive_bound(hbar)};
  return rep;
}

inline TripleReport triple_report(const GaussianState& state) {
  return make_triple_report(variance_along(state, Direction::position()), variance_along(state, Direction::momentum()),
                            variance_along(state, Direction::third()), state.hbar());
}

/// Displaced minimizer |Ξ_α⟩: σ = ħ[[τ/2, -τ/4], [-τ/4, τ/2]].
inline GaussianState xi_state(std::complex<double> alpha = {}, double hbar = 1.0) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw std::invalid_argument("xi_state: non-finite displacement");
  Mat2 cov;
  cov << tau / 2.0, -tau / 4.0, -tau / 4.0, tau / 2.0;
  const double s = std::sqrt(2.0 * hbar);
  return GaussianState(Vec2(s * alpha.real(), s * alpha.imag()), hbar * cov, hbar);
}

inline double wigner_value(const GaussianState& state, double q, double p) {
  const Vec2 d = Vec2(q, p) - state.mean();
  const Mat2& cov = state.cov();
  const double det = cov.determinant();
  const double quad = d.dot(cov.inverse() * d);
  return std::exp(-0.5 * quad) / (2.0 * pi * std::sqrt(det));
}

/// Differential entropy of the marginal of c_q q + c_p p, with the variable
/// measured in units of √ħ. Non-normalized directions are used as given, so
/// Direction::third() yields the entropy of r itself.
inline double marginal_entropy(const GaussianState& state, const Direction& dir) {
  return 0.5 * std::log(2.0 * pi * euler_e * variance_along(state, dir) / state.hbar());
}

inline double marginal_entropy(const GaussianState& state, double theta) {
  return marginal_entropy(state, Direction::quadrature(theta));
}

/// S_q + S_p + S_r.
inline double entropy_sum(const GaussianState& state) {
  return marginal_entropy(state, Direction::position()) + marginal_entropy(state, Direction::momentum()) +
         marginal_entropy(state, Direction::third());
}

/// R_φ S_γ|0⟩. At γ = ln 3^{1/4} and φ = 3π/4 this is |Ξ₀⟩.
inline GaussianState rotated_squeezed_vacuum(double gamma, double phi, double hbar = 1.0) {
  return apply_transform(vacuum_state(hbar), SymplecticTransform::rotation(phi) * SymplecticTransform::squeeze(gamma));
}

/// Pure Gaussian state S_ξ|0⟩ displaced by α; (γ, θ) covers every pure
/// centred Gaussian state.
inline GaussianState squeezed_state(double gamma, double theta, std::complex<double> alpha = {}, double hbar = 1.0) {
  return apply_transform(vacuum_state(hbar), SymplecticTransform::translation(alpha, hbar) *
                                                 SymplecticTransform::general_squeeze(gamma, theta));
}

}  // namespace triple_lab

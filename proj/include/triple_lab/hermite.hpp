#pragma once

// Position-space synthesis of number-basis amplitudes via Hermite functions.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "triple_lab/constants.hpp"

namespace triple_lab {

/// φ_0(x) .. φ_nmax(x) for the unit oscillator (ħ = 1). Upward recurrence
/// carried on a rescaled value with a separate log scale, so large n or |x|
/// neither overflow nor lose the Gaussian factor.
inline std::vector<double> hermite_functions(int nmax, double x) {
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  constexpr double big = 1e100;
  const double log_big = std::log(big);
  double log_scale = -0.5 * x * x;
  double prev = 0.0;
  double cur = std::pow(pi, -0.25);
  out[0] = cur * std::exp(log_scale);
  for (int k = 0; k < nmax; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > big) {
      cur /= big;
      prev /= big;
      log_scale += log_big;
    }
    out[static_cast<std::size_t>(k) + 1] = cur * std::exp(log_scale);
  }
  return out;
}

/// Tabulated Hermite functions on a uniform grid of physical x (units √ħ).
class HermiteTable {
 public:
  HermiteTable(double x_min, double x_max, double step, int nmax, double hbar = 1.0)
      : x_min_(x_min), step_(step), hbar_(hbar) {
    const auto points = static_cast<Eigen::Index>(std::llround((x_max - x_min) / step)) + 1;
    values_.resize(points, nmax + 1);
    const double root = std::sqrt(hbar);
    const double norm = std::pow(hbar, -0.25);
    for (Eigen::Index i = 0; i < points; ++i) {
      const auto h = hermite_functions(nmax, x(i) / root);
      for (int n = 0; n <= nmax; ++n) values_(i, n) = norm * h[static_cast<std::size_t>(n)];
    }
  }

  Eigen::Index size() const { return values_.rows(); }
  int nmax() const { return static_cast<int>(values_.cols()) - 1; }
  double step() const { return step_; }
  double x(Eigen::Index i) const { return x_min_ + step_ * static_cast<double>(i); }

  /// ψ_θ(x_i) = Σ_n c_n e^{-inθ} φ_n(x_i): the amplitude in the eigenbasis of
  /// x(θ) = q cos θ + p sin θ. Amplitudes beyond nmax must vanish.
  Eigen::VectorXcd wavefunction(const Eigen::VectorXcd& amplitudes, double theta = 0.0) const {
    const int used = last_nonzero(amplitudes);
    if (used > nmax()) throw std::invalid_argument("HermiteTable: amplitudes exceed tabulated order");
    Eigen::VectorXcd rotated(used + 1);
    for (int n = 0; n <= used; ++n) rotated(n) = amplitudes(n) * std::polar(1.0, -theta * n);
    return values_.leftCols(used + 1).cast<std::complex<double>>() * rotated;
  }

  Eigen::VectorXd density(const Eigen::VectorXcd& amplitudes, double theta = 0.0) const {
    return wavefunction(amplitudes, theta).cwiseAbs2();
  }

  static int last_nonzero(const Eigen::VectorXcd& amplitudes) {
    int last = 0;
    for (Eigen::Index n = 0; n < amplitudes.size(); ++n)
      if (amplitudes(n) != std::complex<double>(0.0)) last = static_cast<int>(n);
    return last;
  }

 private:
  double x_min_;
  double step_;
  double hbar_;
  Eigen::MatrixXd values_;
};

/// Single-point synthesis ψ_θ(x) for arbitrary amplitudes.
inline std::complex<double> wavefunction_value(const Eigen::VectorXcd& amplitudes, double x, double theta = 0.0,
                                               double hbar = 1.0) {
  const int used = HermiteTable::last_nonzero(amplitudes);
  const auto h = hermite_functions(used, x / std::sqrt(hbar));
  std::complex<double> acc = 0.0;
  for (int n = 0; n <= used; ++n) acc += amplitudes(n) * std::polar(1.0, -theta * n) * h[static_cast<std::size_t>(n)];
  return acc * std::pow(hbar, -0.25);
}

}  // namespace triple_lab

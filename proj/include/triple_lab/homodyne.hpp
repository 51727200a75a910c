#pragma once

// Simulated balanced homodyne detection: quadrature samples x(θ) drawn from
// the exact marginal of a prepared state, with variance estimates and 95%
// confidence intervals for the three observables q, p and r = √2 x(5π/4).

#include <boost/math/distributions/chi_squared.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "triple_lab/constants.hpp"
#include "triple_lab/fock.hpp"
#include "triple_lab/gaussian.hpp"
#include "triple_lab/hermite.hpp"
#include "triple_lab/random.hpp"

namespace triple_lab {

inline constexpr double z_975 = 1.959963984540054;

/// Local-oscillator phases for q, p and x(5π/4).
inline std::vector<double> standard_phases() { return {0.0, pi / 2.0, 1.25 * pi}; }

struct QuadratureSample {
  double mean;
  double variance;  // unbiased, M - 1 degrees of freedom
  int count;
  std::vector<double> values;
};

inline void summarize(QuadratureSample& s) {
  const double m = static_cast<double>(s.values.size());
  double sum = 0.0;
  for (double v : s.values) sum += v;
  s.mean = sum / m;
  double ss = 0.0;
  for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
  s.variance = ss / (m - 1.0);
  s.count = static_cast<int>(s.values.size());
}

inline void require_sample_count(int count) {
  if (count < 100) throw std::invalid_argument("sample_quadrature: at least 100 samples required");
}

/// Exact normal marginal of x(θ): mean vᵀμ, variance vᵀσv, v = (cos θ, sin θ).
inline QuadratureSample sample_quadrature(const GaussianState& state, double theta, int count, std::uint64_t seed,
                                          std::uint64_t stream = 0) {
  require_sample_count(count);
  if (!std::isfinite(theta)) throw std::invalid_argument("sample_quadrature: non-finite phase");
  const Direction dir = Direction::quadrature(theta);
  Rng rng = derive_stream(seed, stream, 0x40D);
  std::normal_distribution<double> normal(mean_along(state, dir), std::sqrt(variance_along(state, dir)));
  QuadratureSample s{};
  s.values.resize(static_cast<std::size_t>(count));
  for (double& v : s.values) v = normal(rng);
  summarize(s);
  return s;
}

/// Tabulated CDF of |ψ_θ(x)|² on [-8√ħ, 8√ħ] for inverse-transform sampling.
class QuadratureTable {
 public:
  QuadratureTable(const FockVector& state, double theta, double hbar = 1.0, double half_width = 8.0,
                  double step = 1e-3) {
    const double root = std::sqrt(hbar);
    const HermiteTable table(-half_width * root, half_width * root, step * root,
                             HermiteTable::last_nonzero(state.amplitudes()), hbar);
    const Eigen::VectorXd rho = table.density(state.amplitudes(), theta);
    x_.resize(static_cast<std::size_t>(table.size()));
    cdf_.resize(x_.size());
    for (Eigen::Index i = 0; i < table.size(); ++i) x_[static_cast<std::size_t>(i)] = table.x(i);
    cdf_[0] = 0.0;
    for (std::size_t i = 1; i < x_.size(); ++i)
      cdf_[i] = cdf_[i - 1] + 0.5 * (rho(static_cast<Eigen::Index>(i)) + rho(static_cast<Eigen::Index>(i) - 1)) *
                                  (x_[i] - x_[i - 1]);
    mass_ = cdf_.back();
    if (std::abs(1.0 - mass_) > 1e-6)
      throw std::runtime_error("sample_quadrature: marginal mass deficit " + std::to_string(1.0 - mass_) +
                               " exceeds 1e-6; state leaks outside the tabulation window");
  }

  double mass() const { return mass_; }

  /// x with CDF(x) = u·mass, linear between grid points.
  double inverse(double u) const {
    const double target = u * mass_;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    if (it == cdf_.begin()) return x_.front();
    if (it == cdf_.end()) return x_.back();
    const auto hi = static_cast<std::size_t>(it - cdf_.begin());
    const std::size_t lo = hi - 1;
    const double width = cdf_[hi] - cdf_[lo];
    const double frac = width > 0.0 ? (target - cdf_[lo]) / width : 0.5;
    return x_[lo] + frac * (x_[hi] - x_[lo]);
  }

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;
  double mass_ = 0.0;
};

inline QuadratureSample sample_quadrature(const FockVector& state, double theta, int count, std::uint64_t seed,
                                          double hbar = 1.0, std::uint64_t stream = 0) {
  require_sample_count(count);
  if (!std::isfinite(theta)) throw std::invalid_argument("sample_quadrature: non-finite phase");
  const QuadratureTable table(state, theta, hbar);
  Rng rng = derive_stream(seed, stream, 0x40D);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  QuadratureSample s{};
  s.values.resize(static_cast<std::size_t>(count));
  for (double& v : s.values) v = table.inverse(unit(rng));
  summarize(s);
  return s;
}

// ---------------------------------------------------------------------------
// Estimates

using PreparedState = std::variant<GaussianState, FockVector>;

struct HomodyneConfig {
  PreparedState state = vacuum_state();
  std::vector<double> phases = standard_phases();
  int samples_per_phase = 100000;
  std::uint64_t seed = 42;
  double hbar = 1.0;  // used by number-basis states; Gaussian states carry their own
  int bootstrap_resamples = 1000;
  std::uint64_t stream = 0;  // separates repeated estimates sharing one seed
};

struct PhaseEstimate {
  double phase;
  double mean;
  double variance;
  double ci_lo;
  double ci_hi;
};

struct HomodyneEstimate {
  std::vector<PhaseEstimate> phases;
  std::string ci_method;  // "chi-square" or "bootstrap"
  int samples_per_phase;
  std::uint64_t seed;
  // Present when the phases are the standard three.
  std::optional<double> var_q, var_p, var_r;
  std::optional<double> triple, triple_ci_lo, triple_ci_hi;
};

/// Exact 95% interval for a normal variance with M - 1 degrees of freedom.
inline std::pair<double, double> chi_square_interval(double variance, int count) {
  const double dof = count - 1.0;
  const boost::math::chi_squared dist(dof);
  return {dof * variance / boost::math::quantile(dist, 0.975), dof * variance / boost::math::quantile(dist, 0.025)};
}

/// Percentile bootstrap of the sample variance.
inline std::pair<double, double> bootstrap_interval(const std::vector<double>& values, int resamples,
                                                    std::uint64_t seed, std::uint64_t stream) {
  if (resamples < 10) throw std::invalid_argument("bootstrap_interval: too few resamples");
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  const std::size_t m = values.size();
  parallel_for(stats.size(), [&](std::size_t b) {
    Rng rng = derive_stream(seed, stream * 100003u + b, 0xB007);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    double sum = 0.0, sum2 = 0.0;
    const double shift = values[0];
    for (std::size_t k = 0; k < m; ++k) {
      const double v = values[pick(rng)] - shift;
      sum += v;
      sum2 += v * v;
    }
    const double md = static_cast<double>(m);
    stats[b] = (sum2 - sum * sum / md) / (md - 1.0);
  });
  std::sort(stats.begin(), stats.end());
  auto quantile = [&](double p) {
    const double pos = p * (static_cast<double>(stats.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, stats.size() - 1);
    return stats[lo] + (pos - static_cast<double>(lo)) * (stats[hi] - stats[lo]);
  };
  return {quantile(0.025), quantile(0.975)};
}

inline bool is_standard_phase_set(const std::vector<double>& phases) {
  const auto ref = standard_phases();
  if (phases.size() != ref.size()) return false;
  for (std::size_t i = 0; i < ref.size(); ++i)
    if (std::abs(phases[i] - ref[i]) > 1e-12) return false;
  return true;
}

/// Samples every phase on its own derived stream, then assembles Δq², Δp²,
/// Δr² = 2 Var[x(5π/4)] and the triple product with a delta-method interval.
inline HomodyneEstimate estimate_triple(const HomodyneConfig& config) {
  require_sample_count(config.samples_per_phase);
  if (config.phases.empty()) throw std::invalid_argument("estimate_triple: no phases");
  for (double ph : config.phases)
    if (!std::isfinite(ph)) throw std::invalid_argument("estimate_triple: non-finite phase");
  const bool gaussian = std::holds_alternative<GaussianState>(config.state);

  HomodyneEstimate est;
  est.ci_method = gaussian ? "chi-square" : "bootstrap";
  est.samples_per_phase = config.samples_per_phase;
  est.seed = config.seed;
  est.phases.resize(config.phases.size());

  auto run_phase = [&](std::size_t k) {
    const std::uint64_t stream = config.stream * 64u + k;
    QuadratureSample s = gaussian ? sample_quadrature(std::get<GaussianState>(config.state), config.phases[k],
                                                      config.samples_per_phase, config.seed, stream)
                                  : sample_quadrature(std::get<FockVector>(config.state), config.phases[k],
                                                      config.samples_per_phase, config.seed, config.hbar, stream);
    const auto ci = gaussian ? chi_square_interval(s.variance, s.count)
                             : bootstrap_interval(s.values, config.bootstrap_resamples, config.seed, stream);
    est.phases[k] = {config.phases[k], s.mean, s.variance, ci.first, ci.second};
  };
  if (gaussian) {
    parallel_for(est.phases.size(), run_phase);
  } else {
    // The bootstrap parallelizes internally.
    for (std::size_t k = 0; k < est.phases.size(); ++k) run_phase(k);
  }

  if (is_standard_phase_set(config.phases)) {
    const double vq = est.phases[0].variance;
    const double vp = est.phases[1].variance;
    const double vr = 2.0 * est.phases[2].variance;
    est.var_q = vq;
    est.var_p = vp;
    est.var_r = vr;
    const double t = std::sqrt(vq * vp * vr);
    double rel2 = 0.0;
    for (const auto& ph : est.phases) {
      const double se = (ph.ci_hi - ph.ci_lo) / (2.0 * z_975);
      rel2 += 0.25 * (se / ph.variance) * (se / ph.variance);
    }
    const double half = z_975 * t * std::sqrt(rel2);
    est.triple = t;
    est.triple_ci_lo = t - half;
    est.triple_ci_hi = t + half;
  }
  return est;
}

struct SweepRow {
  double phi;
  double sampled;
  double ci_lo;
  double ci_hi;
  double exact;
};

/// Sampled and closed-form triple products along R_φ S_γ|0⟩.
inline std::vector<SweepRow> rotation_sweep(double gamma, const std::vector<double>& phi_grid, int count,
                                            std::uint64_t seed, double hbar = 1.0) {
  if (phi_grid.empty()) throw std::invalid_argument("rotation_sweep: empty grid");
  std::vector<SweepRow> rows;
  rows.reserve(phi_grid.size());
  for (std::size_t i = 0; i < phi_grid.size(); ++i) {
    const GaussianState s = rotated_squeezed_vacuum(gamma, phi_grid[i], hbar);
    HomodyneConfig cfg;
    cfg.state = s;
    cfg.samples_per_phase = count;
    cfg.seed = seed;
    cfg.stream = i + 1;
    const HomodyneEstimate e = estimate_triple(cfg);
    rows.push_back({phi_grid[i], *e.triple, *e.triple_ci_lo, *e.triple_ci_hi, triple_report(s).triple_product});
  }
  return rows;
}

}  // namespace triple_lab

#pragma once

// Variational searches for the minimal triple uncertainty: closed-form
// Gaussian families, the full truncated number space, and the entropy sum.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "triple_lab/constants.hpp"
#include "triple_lab/fock.hpp"
#include "triple_lab/gaussian.hpp"
#include "triple_lab/hermite.hpp"
#include "triple_lab/random.hpp"

namespace triple_lab {

enum class Objective { product, sum };

inline Objective parse_objective(std::string_view name) {
  if (name == "product") return Objective::product;
  if (name == "sum") return Objective::sum;
  throw std::invalid_argument("unknown objective: " + std::string(name));
}

inline std::string to_string(Objective o) { return o == Objective::product ? "product" : "sum"; }

/// Lower bound on the objective: (τħ/2)^{3/2} or 3τħ/2.
inline double objective_bound(Objective o, double hbar = 1.0) {
  return o == Objective::product ? triple_bound(hbar) : additive_bound(hbar);
}

/// Thrown when a search reports a value below the proven bound.
class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void enforce_bound(Objective o, double value, double hbar, std::string_view where, std::string_view dump) {
  const double bound = objective_bound(o, hbar);
  if (value < bound - 1e-6) {
    std::ostringstream msg;
    msg.precision(17);
    msg << where << ": objective " << to_string(o) << " = " << value << " below bound " << bound << "; " << dump;
    throw BoundViolation(msg.str());
  }
}

/// Squeeze ξ = γ e^{iθ} plus displacement α.
struct GaussianParams {
  double gamma = 0.0;
  double theta = 0.0;
  std::complex<double> alpha{};

  /// γ ≥ 0 and θ in [0, 2π); (−γ, θ) is the same squeeze as (γ, θ + π).
  GaussianParams canonical() const {
    if (!std::isfinite(gamma) || !std::isfinite(theta)) throw std::invalid_argument("GaussianParams: non-finite");
    GaussianParams out = *this;
    if (out.gamma < 0.0) {
      out.gamma = -out.gamma;
      out.theta += pi;
    }
    out.theta = std::fmod(out.theta, 2.0 * pi);
    if (out.theta < 0.0) out.theta += 2.0 * pi;
    if (out.theta >= 2.0 * pi) out.theta = 0.0;
    return out;
  }

  GaussianState state(double hbar = 1.0) const { return squeezed_state(gamma, theta, alpha, hbar); }
};

inline double objective_value(Objective o, const GaussianState& s) {
  const TripleReport rep = triple_report(s);
  return o == Objective::product ? rep.triple_product : rep.additive_sum;
}

// ---------------------------------------------------------------------------
// Rotated squeezed family

struct ScanRow {
  double phi;
  double pair_qp;
  double triple_product;
};

inline std::vector<ScanRow> scan_rotated_family(double gamma, const std::vector<double>& phi_grid, double hbar = 1.0) {
  if (phi_grid.empty()) throw std::invalid_argument("scan_rotated_family: empty grid");
  std::vector<ScanRow> rows;
  rows.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    const TripleReport rep = triple_report(rotated_squeezed_vacuum(gamma, phi, hbar));
    rows.push_back({phi, rep.pair_qp, rep.triple_product});
  }
  return rows;
}

/// count points spanning [lo, hi] inclusive.
inline std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("linear_grid: count must be positive");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return g;
}

// ---------------------------------------------------------------------------
// Nelder–Mead

struct SimplexResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
  bool converged;
};

struct SimplexOptions {
  double initial_step = 0.1;
  double ftol = 1e-15;
  double xtol = 1e-10;
  int max_iterations = 5000;
};

template <class F>
SimplexResult nelder_mead(F&& f, const Eigen::VectorXd& start, const SimplexOptions& opt = {}) {
  const Eigen::Index n = start.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n) + 1, start);
  std::vector<double> vals(pts.size());
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i) + 1](i) += opt.initial_step;
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(pts.size());
  int it = 0;
  bool converged = false;
  for (; it < opt.max_iterations; ++it) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (const auto& p : pts) diameter = std::max(diameter, (p - pts[best]).cwiseAbs().maxCoeff());
    if (vals[worst] - vals[best] <= opt.ftol * std::max(1.0, std::abs(vals[best])) && diameter <= opt.xtol) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid)) : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = f(contracted);
    if (fc < std::min(fr, vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = f(pts[i]);
    }
  }
  const auto best_it = std::min_element(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(best_it - vals.begin());
  return {pts[idx], vals[idx], it, converged};
}

// ---------------------------------------------------------------------------
// Search results

/// Second moments of the best Fock state after removing its mean.
struct FockDigest {
  int dim = 0;
  double mean_q = 0.0, mean_p = 0.0;
  double qq = 0.0, qp = 0.0, pp = 0.0;
  double overlap_xi = 0.0;     // |⟨Ξ_α|ψ⟩| with α matching the means of ψ
  double stationarity = 0.0;
  double edge_weight = 0.0;    // probability in the top quarter of levels
};

struct SearchResult {
  Objective objective = Objective::product;
  double best_value = 0.0;
  double start_value = 0.0;
  std::optional<GaussianParams> params;
  std::optional<FockDigest> digest;
  int iterations = 0;
  int restarts = 0;
  bool converged = false;
  double gap_to_bound = 0.0;
  std::uint64_t seed = 0;
  double hbar = 1.0;
};

// ---------------------------------------------------------------------------
// Gaussian branch

/// Multi-start simplex descent over (γ, θ) with α = 0, starting from `start`
/// and a 12×12 grid over [0, 1.5]×[0, 2π).
inline SearchResult minimize_gaussian(Objective objective, const GaussianParams& start, double tol = 1e-8,
                                      double hbar = 1.0) {
  if (!(tol > 0.0)) throw std::invalid_argument("minimize_gaussian: tol must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("minimize_gaussian: hbar must be positive");
  const GaussianParams origin = start.canonical();

  auto value = [&](const Eigen::VectorXd& x) {
    return objective_value(objective, squeezed_state(x(0), x(1), {}, hbar));
  };

  constexpr int grid = 12;
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::Vector2d(origin.gamma, origin.theta));
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) starts.push_back(Eigen::Vector2d(1.5 * i / (grid - 1), 2.0 * pi * j / grid));

  SimplexOptions opt;
  opt.ftol = std::min(tol, 1e-8) * 1e-7;
  opt.xtol = 1e-9;
  std::vector<SimplexResult> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) { runs[k] = nelder_mead(value, starts[k], opt); });

  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (runs[k].value < runs[best].value) best = k;

  SearchResult res;
  res.objective = objective;
  res.hbar = hbar;
  res.start_value = value(starts.front());
  res.best_value = runs[best].value;
  res.params = GaussianParams{runs[best].x(0), runs[best].x(1), {}}.canonical();
  res.iterations = runs[best].iterations;
  res.restarts = static_cast<int>(runs.size());
  res.converged = runs[best].converged;
  res.gap_to_bound = res.best_value - objective_bound(objective, hbar);
  std::ostringstream dump;
  dump.precision(17);
  dump << "gamma=" << res.params->gamma << " theta=" << res.params->theta;
  enforce_bound(objective, res.best_value, hbar, "minimize_gaussian", dump.str());
  return res;
}

// ---------------------------------------------------------------------------
// Fock branch

struct FockObjectiveValue {
  double value;
  ComplexVector gradient;  // gradient in the real coordinates (Re ψ, Im ψ), tangent to the sphere
};

/// Objective at ψ/‖ψ‖ together with its gradient. For F scale- and
/// phase-invariant, the directional derivative along δ is Re⟨gradient, δ⟩.
inline FockObjectiveValue fock_objective(Objective objective, const ComplexVector& psi_raw, const OperatorSet& ops) {
  if (psi_raw.size() != ops.dim) throw std::invalid_argument("fock_objective: dimension mismatch");
  const double norm = psi_raw.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("fock_objective: zero or non-finite state");
  const ComplexVector psi = psi_raw / norm;

  const ComplexMatrix* x[3] = {&ops.q, &ops.p, &ops.r};
  const ComplexMatrix* x2[3] = {&ops.q2, &ops.p2, &ops.r2};
  double var[3];
  ComplexVector centred[3];
  for (int k = 0; k < 3; ++k) {
    const ComplexVector xpsi = *x[k] * psi;
    const double m = psi.dot(xpsi).real();
    const ComplexVector sq = *x2[k] * psi - 2.0 * m * xpsi + m * m * psi;
    var[k] = psi.dot(sq).real();
    centred[k] = sq - var[k] * psi;  // ((X - m)² - V) ψ
  }
  for (double v : var)
    if (!(v > 0.0)) throw std::domain_error("fock_objective: vanishing variance");

  FockObjectiveValue out;
  out.gradient = ComplexVector::Zero(ops.dim);
  if (objective == Objective::product) {
    out.value = std::sqrt(var[0] * var[1] * var[2]);
    for (int i = 0; i < 3; ++i) out.gradient += (out.value / var[i]) * centred[i];
  } else {
    out.value = var[0] + var[1] + var[2];
    for (int i = 0; i < 3; ++i) out.gradient += 2.0 * centred[i];
  }
  out.gradient /= norm;
  return out;
}

struct FockDescent {
  ComplexVector state;
  double value;
  int iterations;
  bool stalled;
};

/// Projected gradient on the unit sphere: Barzilai–Borwein trial step with
/// Armijo backtracking, renormalizing after every step. Stops when the
/// relative gradient drops below gradient_tol or when no step decreases the
/// value any more, which happens once the value is resolved to roundoff.
inline FockDescent descend_fock(Objective objective, ComplexVector psi, const OperatorSet& ops, int max_iterations = 20000,
                                double gradient_tol = 1e-9) {
  psi.normalize();
  FockObjectiveValue cur = fock_objective(objective, psi, ops);
  double step = 1e-2;
  ComplexVector prev_psi, prev_grad;
  int it = 0;
  bool stalled = false;
  for (; it < max_iterations; ++it) {
    const double gnorm2 = cur.gradient.squaredNorm();
    if (std::sqrt(gnorm2) <= gradient_tol * cur.value) break;
    if (it > 0) {
      const ComplexVector s = psi - prev_psi;
      const ComplexVector y = cur.gradient - prev_grad;
      const double sy = std::abs(s.dot(y).real());
      if (sy > 0.0) step = std::clamp(s.squaredNorm() / sy, 1e-8, 1e3);
    }
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      ComplexVector trial = psi - step * cur.gradient;
      trial.normalize();
      FockObjectiveValue next;
      try {
        next = fock_objective(objective, trial, ops);
      } catch (const std::domain_error&) {
        step *= 0.5;
        continue;
      }
      if (next.value < cur.value && next.value <= cur.value - 1e-4 * step * gnorm2) {
        prev_psi = psi;
        prev_grad = cur.gradient;
        psi = std::move(trial);
        cur = std::move(next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
  }
  return {psi, cur.value, it, stalled};
}

inline FockDigest fock_digest(const FockVector& state, const OperatorSet& ops) {
  FockDigest d;
  d.dim = ops.dim;
  const FockCovariance c = covariance(state, ops);
  d.mean_q = c.mean_q;
  d.mean_p = c.mean_p;
  d.qq = c.qq;
  d.qp = c.qp;
  d.pp = c.pp;
  const double s = std::sqrt(2.0 * ops.hbar);
  const cplx alpha(c.mean_q / s, c.mean_p / s);
  const FockVector xi = build_extremal_state(0, alpha, ops.dim, ops.hbar).state;
  d.overlap_xi = std::abs(xi.amplitudes().dot(state.amplitudes()));
  d.stationarity = stationarity_residual(state, ops);
  const int top = ops.dim / 4;
  d.edge_weight = state.amplitudes().tail(top).squaredNorm();
  return d;
}

struct FockSearchOptions {
  int max_iterations = 20000;
  double gradient_tol = 1e-9;
  /// Explicit start state. It receives a seeded 1e-3 perturbation so that a
  /// stationary start (a saddle) can be escaped.
  std::optional<ComplexVector> start;
};

/// Multi-start projected gradient over the truncated number space. Restart k
/// draws its start from the stream (seed, k) on the lowest N/4 levels.
inline SearchResult minimize_fock(Objective objective, int dim, int restarts, std::uint64_t seed, double hbar = 1.0,
                                  const FockSearchOptions& opt = {}) {
  if (dim < 32) throw std::invalid_argument("minimize_fock: truncation must be at least 32");
  if (restarts < 1) throw std::invalid_argument("minimize_fock: restarts must be positive");
  if (opt.start && opt.start->size() != dim) throw std::invalid_argument("minimize_fock: start has wrong dimension");
  const OperatorSet ops = build_operators(dim, hbar);

  std::vector<ComplexVector> starts(static_cast<std::size_t>(restarts));
  for (int k = 0; k < restarts; ++k) {
    Rng rng = derive_stream(seed, static_cast<std::uint64_t>(k), 0xF0C);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector v = ComplexVector::Zero(dim);
    if (opt.start) {
      v = *opt.start / opt.start->norm();
      for (int n = 0; n < dim / 4; ++n) v(n) += 1e-3 * cplx(normal(rng), normal(rng));
    } else {
      for (int n = 0; n < dim / 4; ++n) v(n) = cplx(normal(rng), normal(rng));
    }
    starts[static_cast<std::size_t>(k)] = v.normalized();
  }

  std::vector<FockDescent> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) {
    runs[k] = descend_fock(objective, starts[k], ops, opt.max_iterations, opt.gradient_tol);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (runs[k].value < runs[best].value) best = k;

  SearchResult res;
  res.objective = objective;
  res.hbar = hbar;
  res.seed = seed;
  res.restarts = restarts;
  res.start_value = fock_objective(objective, starts[best], ops).value;
  res.best_value = runs[best].value;
  res.iterations = runs[best].iterations;
  const FockVector state = FockVector::normalized(runs[best].state);
  res.digest = fock_digest(state, ops);
  res.converged = res.digest->stationarity < 1e-6;
  res.gap_to_bound = res.best_value - objective_bound(objective, hbar);
  std::ostringstream dump;
  dump.precision(17);
  dump << "restart=" << best << " seed=" << seed << " qq=" << res.digest->qq << " qp=" << res.digest->qp
       << " pp=" << res.digest->pp;
  enforce_bound(objective, res.best_value, hbar, "minimize_fock", dump.str());
  return res;
}

// ---------------------------------------------------------------------------
// Entropy sum

enum class EntropyFamily { gaussian, fock };

inline EntropyFamily parse_entropy_family(std::string_view name) {
  if (name == "gaussian") return EntropyFamily::gaussian;
  if (name == "fock") return EntropyFamily::fock;
  throw std::invalid_argument("unknown entropy family: " + std::string(name));
}

struct EntropySample {
  int id;
  double s_q, s_p, s_r;
  double sum;
  double mass_deficit;  // |1 - ∫ρ| of the worst marginal; zero for closed forms
  bool ok;
};

struct EntropyScanReport {
  EntropyFamily family;
  std::uint64_t seed;
  double bound;
  std::vector<EntropySample> samples;
  double minimum;
  int argmin;
  int violations;  // samples with sum < bound - 1e-6
  int failed;      // samples rejected by the quadrature check
  // Gaussian family only: simplex refinement from the best sample.
  std::optional<double> refined_minimum;
  std::optional<Mat2> refined_cov;
};

/// Differential entropy -∫ρ ln(ρ√ħ) of a tabulated density.
inline double tabulated_entropy(const Eigen::VectorXd& rho, double step, double hbar, double& mass) {
  mass = 0.0;
  double s = 0.0;
  const double root = std::sqrt(hbar);
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    mass += rho(i) * step;
    if (rho(i) > 0.0) s -= rho(i) * std::log(rho(i) * root) * step;
  }
  return s;
}

/// S_q, S_p, S_r of a number-basis state by quadrature on [-8√ħ, 8√ħ].
inline EntropySample fock_entropies(const Eigen::VectorXcd& amplitudes, const HermiteTable& table, double hbar) {
  EntropySample e{};
  double worst = 0.0;
  double m = 0.0;
  e.s_q = tabulated_entropy(table.density(amplitudes, 0.0), table.step(), hbar, m);
  worst = std::max(worst, std::abs(1.0 - m));
  e.s_p = tabulated_entropy(table.density(amplitudes, pi / 2.0), table.step(), hbar, m);
  worst = std::max(worst, std::abs(1.0 - m));
  // r = √2 x(5π/4), so its density is the x(5π/4) density stretched by √2.
  e.s_r = tabulated_entropy(table.density(amplitudes, 1.25 * pi), table.step(), hbar, m) + 0.5 * std::log(2.0);
  worst = std::max(worst, std::abs(1.0 - m));
  e.sum = e.s_q + e.s_p + e.s_r;
  e.mass_deficit = worst;
  e.ok = worst <= 1e-6;
  return e;
}

struct EntropyScanOptions {
  int fock_dim = 64;
  int fock_levels = 7;  // superpositions of |0⟩..|6⟩
  double grid_half_width = 8.0;
  double grid_step = 2e-3;
  double gamma_max = 1.5;
  double hbar = 1.0;
};

inline EntropyScanReport entropy_conjecture_scan(EntropyFamily family, int sample_count, std::uint64_t seed,
                                                 const EntropyScanOptions& opt = {}) {
  if (sample_count < 1) throw std::invalid_argument("entropy_conjecture_scan: sample_count must be positive");
  if (opt.fock_levels < 1 || opt.fock_levels > opt.fock_dim)
    throw std::invalid_argument("entropy_conjecture_scan: bad level count");
  EntropyScanReport rep{};
  rep.family = family;
  rep.seed = seed;
  rep.bound = entropy_bound();
  rep.samples.resize(static_cast<std::size_t>(sample_count));

  std::optional<HermiteTable> table;
  if (family == EntropyFamily::fock) {
    const double root = std::sqrt(opt.hbar);
    table.emplace(-opt.grid_half_width * root, opt.grid_half_width * root, opt.grid_step * root, opt.fock_levels - 1,
                  opt.hbar);
  }

  std::vector<GaussianParams> params(rep.samples.size());
  parallel_for(rep.samples.size(), [&](std::size_t i) {
    Rng rng = derive_stream(seed, i, family == EntropyFamily::gaussian ? 0xE6 : 0xEF);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    EntropySample e{};
    if (family == EntropyFamily::gaussian) {
      params[i] = {opt.gamma_max * unit(rng), 2.0 * pi * unit(rng), {}};
      const GaussianState s = params[i].state(opt.hbar);
      e.s_q = marginal_entropy(s, Direction::position());
      e.s_p = marginal_entropy(s, Direction::momentum());
      e.s_r = marginal_entropy(s, Direction::third());
      e.sum = e.s_q + e.s_p + e.s_r;
      e.ok = true;
    } else {
      Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(opt.fock_dim);
      for (int n = 0; n < opt.fock_levels; ++n) amps(n) = cplx(normal(rng), normal(rng));
      amps.normalize();
      e = fock_entropies(amps, *table, opt.hbar);
    }
    e.id = static_cast<int>(i);
    rep.samples[i] = e;
  });

  rep.minimum = std::numeric_limits<double>::infinity();
  rep.argmin = -1;
  for (const auto& e : rep.samples) {
    if (!e.ok) {
      ++rep.failed;
      continue;
    }
    if (e.sum < rep.bound - 1e-6) ++rep.violations;
    if (e.sum < rep.minimum) {
      rep.minimum = e.sum;
      rep.argmin = e.id;
    }
  }

  if (family == EntropyFamily::gaussian && rep.argmin >= 0) {
    const GaussianParams& p0 = params[static_cast<std::size_t>(rep.argmin)];
    auto value = [&](const Eigen::VectorXd& x) { return entropy_sum(squeezed_state(x(0), x(1), {}, opt.hbar)); };
    SimplexOptions sopt;
    sopt.initial_step = 0.05;
    sopt.ftol = 1e-16;
    sopt.xtol = 1e-10;
    const SimplexResult r = nelder_mead(value, Eigen::Vector2d(p0.gamma, p0.theta), sopt);
    rep.refined_minimum = r.value;
    rep.refined_cov = squeezed_state(r.x(0), r.x(1), {}, opt.hbar).cov();
    if (r.value < rep.bound - 1e-6) ++rep.violations;
  }
  return rep;
}

}  // namespace triple_lab

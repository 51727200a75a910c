#include <catch_amalgamated.hpp>

#include <triple_lab/extremal.hpp>
#include <triple_lab/homodyne.hpp>

#include <cmath>

using namespace triple_lab;
using Catch::Approx;

namespace {

constexpr double kXiTriple = 0.438691337650830820273;  // 3^{-3/4}
constexpr double kTauHalf = 0.577350269189625764509;

bool covers(const PhaseEstimate& p, double exact) { return p.ci_lo <= exact && exact <= p.ci_hi; }

}  // namespace

TEST_CASE("vacuum quadrature variance", "[homodyne]") {
  const auto s = sample_quadrature(vacuum_state(), 0.0, 1000000, 123);
  CHECK(s.count == 1000000);
  CHECK(std::abs(s.variance - 0.5) < 0.003);
  CHECK(std::abs(s.mean) < 0.003);
}

TEST_CASE("r-quadrature of Xi0", "[homodyne]") {
  const auto s = sample_quadrature(xi_state(), 1.25 * pi, 1000000, 42);
  CHECK(std::abs(2.0 * s.variance - kTauHalf) < 0.004);
}

TEST_CASE("sampling is deterministic for a fixed seed", "[homodyne]") {
  const auto a = sample_quadrature(xi_state(), 0.3, 1000, 9);
  const auto b = sample_quadrature(xi_state(), 0.3, 1000, 9);
  CHECK(a.values == b.values);
  CHECK(a.variance == b.variance);
  const auto c = sample_quadrature(xi_state(), 0.3, 1000, 10);
  CHECK(a.values != c.values);
  const auto fock = build_extremal_state(0, {}, 64).state;
  CHECK(sample_quadrature(fock, 0.0, 500, 4).values == sample_quadrature(fock, 0.0, 500, 4).values);
}

TEST_CASE("sampling rejects bad input", "[homodyne]") {
  CHECK_THROWS_AS(sample_quadrature(vacuum_state(), 0.0, 99, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_quadrature(vacuum_state(), std::nan(""), 1000, 1), std::invalid_argument);
  // |40⟩ spreads beyond ±8, so the tabulated marginal misses mass.
  CHECK_THROWS_AS(sample_quadrature(FockVector::number(40, 64), 0.0, 1000, 1), std::runtime_error);
  HomodyneConfig cfg;
  cfg.samples_per_phase = 10;
  CHECK_THROWS_AS(estimate_triple(cfg), std::invalid_argument);
  cfg.samples_per_phase = 1000;
  cfg.phases.clear();
  CHECK_THROWS_AS(estimate_triple(cfg), std::invalid_argument);
}

TEST_CASE("tabulated marginals are normalized", "[homodyne][property]") {
  for (int n : {0, 1, 3, 6, 10}) {
    const QuadratureTable t(FockVector::number(n, 64), 0.4);
    CHECK(std::abs(t.mass() - 1.0) < 1e-6);
  }
  const QuadratureTable xi(build_extremal_state(0, {}, 128).state, 1.25 * pi);
  CHECK(std::abs(xi.mass() - 1.0) < 1e-6);
  const QuadratureTable moved(build_extremal_state(0, {0.7, -0.4}, 128).state, 0.0);
  CHECK(std::abs(moved.mass() - 1.0) < 1e-6);
}

TEST_CASE("triple estimates at one million samples", "[homodyne]") {
  HomodyneConfig cfg;
  cfg.state = xi_state();
  cfg.samples_per_phase = 1000000;
  cfg.seed = 42;
  const auto xi = estimate_triple(cfg);
  REQUIRE(xi.triple);
  CHECK(xi.ci_method == "chi-square");
  CHECK(std::abs(*xi.triple - kXiTriple) < 0.002);
  CHECK(*xi.triple_ci_lo <= *xi.triple);
  CHECK(*xi.triple <= *xi.triple_ci_hi);
  CHECK(*xi.var_r == Approx(2.0 * xi.phases[2].variance));

  cfg.state = vacuum_state();
  const auto vac = estimate_triple(cfg);
  CHECK(std::abs(*vac.triple - 0.5) < 0.002);
  for (const auto& p : vac.phases) {
    CHECK(p.ci_lo <= p.variance);
    CHECK(p.variance <= p.ci_hi);
  }
}

TEST_CASE("interval width scales as one over root M", "[homodyne]") {
  HomodyneConfig cfg;
  cfg.state = xi_state();
  cfg.seed = 5;
  cfg.samples_per_phase = 1000;
  const auto small = estimate_triple(cfg);
  cfg.samples_per_phase = 1000000;
  const auto large = estimate_triple(cfg);
  const double ratio =
      (*small.triple_ci_hi - *small.triple_ci_lo) / (*large.triple_ci_hi - *large.triple_ci_lo);
  CHECK(ratio == Approx(std::sqrt(1000.0)).epsilon(0.1));
}

TEST_CASE("chi-square interval matches tabulated quantiles", "[homodyne]") {
  // dof = 9: χ²_{0.025} = 2.70038948, χ²_{0.975} = 19.0227678.
  const auto [lo, hi] = chi_square_interval(1.0, 10);
  CHECK(lo == Approx(9.0 / 19.0227678).epsilon(1e-7));
  CHECK(hi == Approx(9.0 / 2.70038948).epsilon(1e-7));
}

TEST_CASE("estimator consistency and coverage", "[homodyne][property]") {
  int consistent = 0;
  int covered = 0;
  const double exact = kTauHalf;
  for (int run = 0; run < 100; ++run) {
    const auto v = sample_quadrature(vacuum_state(), 0.0, 10000, 1000 + run);
    if (std::abs(v.variance - 0.5) < 5.0 * 0.5 * std::sqrt(2.0 / 10000.0)) ++consistent;
    HomodyneConfig cfg;
    cfg.state = xi_state();
    cfg.samples_per_phase = 10000;
    cfg.seed = static_cast<std::uint64_t>(run);
    const auto e = estimate_triple(cfg);
    if (covers(e.phases[0], exact)) ++covered;
  }
  CHECK(consistent >= 99);
  CHECK(covered >= 90);
}

TEST_CASE("Fock and Gaussian sampling paths agree", "[homodyne]") {
  const auto fock = build_extremal_state(0, {}, 128).state;
  for (double theta : standard_phases()) {
    const auto a = sample_quadrature(xi_state(), theta, 100000, 77);
    const auto b = sample_quadrature(fock, theta, 100000, 78);
    const double se = std::sqrt(2.0 / 100000.0) * 0.5 * (a.variance + b.variance);
    CHECK(std::abs(a.variance - b.variance) < 2.0 * 1.96 * se);
  }
}

TEST_CASE("bootstrap intervals for number-basis states", "[homodyne]") {
  HomodyneConfig cfg;
  cfg.state = build_extremal_state(0, {}, 64).state;
  cfg.samples_per_phase = 20000;
  cfg.seed = 8;
  const auto e = estimate_triple(cfg);
  CHECK(e.ci_method == "bootstrap");
  for (const auto& p : e.phases) {
    CHECK(p.ci_lo <= p.variance);
    CHECK(p.variance <= p.ci_hi);
  }
  CHECK(std::abs(*e.triple - kXiTriple) < 4.0 * (*e.triple_ci_hi - *e.triple_ci_lo));
  const auto again = estimate_triple(cfg);
  CHECK(again.phases[1].ci_lo == e.phases[1].ci_lo);
}

TEST_CASE("non-standard phase sets carry no triple", "[homodyne]") {
  HomodyneConfig cfg;
  cfg.state = vacuum_state();
  cfg.phases = {0.0, 1.0};
  cfg.samples_per_phase = 1000;
  const auto e = estimate_triple(cfg);
  CHECK(e.phases.size() == 2);
  CHECK_FALSE(e.triple.has_value());
}

TEST_CASE("rotation sweep follows the closed form", "[homodyne]") {
  const double gamma = 0.25 * std::log(3.0);
  const auto rows = rotation_sweep(gamma, {0.0, 0.75 * pi, pi}, 100000, 42);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].exact == Approx(kXiTriple).epsilon(1e-12));
  const auto scan = scan_rotated_family(gamma, {0.0, 0.75 * pi, pi});
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(std::abs(rows[i].exact - scan[i].triple_product) < 1e-12);
  const double half = 0.5 * (rows[1].ci_hi - rows[1].ci_lo);
  CHECK(std::abs(rows[1].sampled - kXiTriple) < 3.0 * half);
  // Period π: the φ = 0 and φ = π estimates are statistically indistinguishable.
  CHECK(rows[0].exact == Approx(rows[2].exact).epsilon(1e-10));
  const double h0 = 0.5 * (rows[0].ci_hi - rows[0].ci_lo);
  const double h2 = 0.5 * (rows[2].ci_hi - rows[2].ci_lo);
  CHECK(std::abs(rows[0].sampled - rows[2].sampled) < 2.0 * std::hypot(h0, h2));
  CHECK_THROWS_AS(rotation_sweep(gamma, {}, 1000, 1), std::invalid_argument);
}

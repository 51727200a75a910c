#include <catch_amalgamated.hpp>

#include <triple_lab/extremal.hpp>

#include <cmath>
#include <cstdlib>
#include <random>

using namespace triple_lab;
using Catch::Approx;

namespace {

// Reference values computed independently with mpmath (30 digits).
constexpr double kXiTriple = 0.438691337650830820273;       // 3^{-3/4}
constexpr double kSqrt3 = 1.73205080756887729353;
constexpr double kFig2AtZero = 0.537284965911770959777;     // √τ/2
constexpr double kTripleAtPiThird = 0.719092426773857842176;
constexpr double kPairAtPiThird = 0.559016994374947424102;
constexpr double kTripleAtPiQuarter = 0.759835685651592547331;
constexpr double kFirstExcitedTriple = 2.27950705695477764199;  // (3τ/2)^{3/2}
constexpr double kTauToThreeHalves = 1.24080647880279946525;    // bound at ħ = 2
constexpr double kEntropyBound = 3.43285638311293595679;
constexpr double kPairImpliedEntropy = 3.21709482877410026122;  // (3/2) ln(eπ)
constexpr double kVacuumEntropySum = 3.56366841905407291592;
constexpr double kTauHalf = 0.577350269189625764509;
constexpr double kTauQuarter = 0.288675134594812882255;

const double kGammaFig2 = 0.25 * std::log(3.0);

double xi_cov_deviation(double qq, double qp, double pp) {
  return std::max({std::abs(qq - kTauHalf), std::abs(pp - kTauHalf), std::abs(qp + kTauQuarter)});
}

}  // namespace

TEST_CASE("rotated family reproduces the closed-form curve", "[extremal]") {
  const auto rows = scan_rotated_family(kGammaFig2, {0.0, pi / 4.0, pi / 3.0, pi / 2.0, 0.75 * pi, pi});
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].pair_qp == Approx(0.5).margin(1e-12));
  CHECK(rows[0].triple_product == Approx(kFig2AtZero).epsilon(1e-12));
  CHECK(rows[1].triple_product == Approx(kTripleAtPiQuarter).epsilon(1e-12));
  CHECK(rows[2].triple_product == Approx(kTripleAtPiThird).epsilon(1e-12));
  CHECK(rows[2].pair_qp == Approx(kPairAtPiThird).epsilon(1e-12));
  CHECK(rows[3].pair_qp == Approx(0.5).margin(1e-12));
  CHECK(rows[4].triple_product == Approx(kXiTriple).epsilon(1e-12));
  CHECK(rows[5].pair_qp == Approx(0.5).margin(1e-12));

  // On the default 181-point grid the minimum sits at index 135 (φ = 3π/4).
  const auto grid = linear_grid(0.0, pi, 181);
  const auto full = scan_rotated_family(kGammaFig2, grid);
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < full.size(); ++i)
    if (full[i].triple_product < full[argmin].triple_product) argmin = i;
  CHECK(argmin == 135);
  for (const auto& r : full) {
    CHECK(r.pair_qp >= 0.5 - 1e-12);
    CHECK(r.triple_product >= kXiTriple - 1e-12);
  }
  CHECK_THROWS_AS(scan_rotated_family(kGammaFig2, {}), std::invalid_argument);
}

TEST_CASE("rotated family has period pi", "[extremal][property]") {
  Rng rng = derive_stream(11, 0);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double phi = u(rng);
    const auto rows = scan_rotated_family(kGammaFig2, {phi, phi + pi});
    CHECK(std::abs(rows[0].triple_product - rows[1].triple_product) < 1e-10);
    CHECK(std::abs(rows[0].pair_qp - rows[1].pair_qp) < 1e-10);
  }
}

TEST_CASE("nelder_mead minimizes a curved valley", "[extremal]") {
  auto rosen = [](const Eigen::VectorXd& x) {
    return 100.0 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1.0 - x(0), 2);
  };
  SimplexOptions opt;
  opt.max_iterations = 20000;
  const auto r = nelder_mead(rosen, Eigen::Vector2d(-1.2, 1.0), opt);
  CHECK(r.converged);
  CHECK(std::abs(r.x(0) - 1.0) < 1e-6);
  CHECK(std::abs(r.x(1) - 1.0) < 1e-6);
}

TEST_CASE("GaussianParams canonical form", "[extremal]") {
  const auto a = GaussianParams{-0.3, 0.5, {}}.canonical();
  CHECK(a.gamma == Approx(0.3));
  CHECK(a.theta == Approx(0.5 + pi));
  const auto b = GaussianParams{0.2, -pi / 2.0, {}}.canonical();
  CHECK(b.theta == Approx(1.5 * pi));
  const auto c = GaussianParams{0.2, 7.0 * pi, {}}.canonical();
  CHECK(c.theta == Approx(pi));
  // Same state before and after.
  const auto s1 = GaussianParams{-0.3, 0.5, {}}.state();
  CHECK((s1.cov() - a.state().cov()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS((GaussianParams{std::nan(""), 0.0, {}}.canonical()), std::invalid_argument);
}

TEST_CASE("Gaussian search reaches the triple bound", "[extremal]") {
  const auto r = minimize_gaussian(Objective::product, {}, 1e-8);
  CHECK(r.converged);
  CHECK(std::abs(r.best_value - kXiTriple) < 1e-8);
  CHECK(r.start_value == Approx(0.5).epsilon(1e-12));
  REQUIRE(r.params);
  CHECK(std::abs(r.params->gamma - 0.25 * std::log(3.0)) < 1e-4);
  CHECK(std::abs(r.params->theta - pi / 2.0) < 1e-4);
  CHECK(r.gap_to_bound > -1e-9);
  CHECK(r.restarts >= 145);

  const auto s = minimize_gaussian(Objective::sum, {0.9, 4.0, {}}, 1e-8);
  CHECK(std::abs(s.best_value - kSqrt3) < 1e-8);
  CHECK(std::abs(s.params->gamma - 0.25 * std::log(3.0)) < 1e-4);
  CHECK(std::abs(s.params->theta - pi / 2.0) < 1e-4);

  // ħ = 2 rescales the minimum by 2^{3/2}.
  const auto h2 = minimize_gaussian(Objective::product, {}, 1e-8, 2.0);
  CHECK(std::abs(h2.best_value - kTauToThreeHalves) < 1e-8);

  CHECK_THROWS_AS(minimize_gaussian(Objective::product, {}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(parse_objective("max"), std::invalid_argument);
}

TEST_CASE("searches refuse to report values below the bound", "[extremal]") {
  CHECK_THROWS_AS(enforce_bound(Objective::product, kXiTriple - 1e-3, 1.0, "test", ""), BoundViolation);
  CHECK_THROWS_AS(enforce_bound(Objective::sum, 1.7, 1.0, "test", ""), BoundViolation);
  CHECK_NOTHROW(enforce_bound(Objective::product, kXiTriple - 1e-9, 1.0, "test", ""));
}

TEST_CASE("Fock objective gradient matches finite differences", "[extremal][property]") {
  const auto ops = build_operators(32);
  Rng rng = derive_stream(3, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const Objective obj : {Objective::product, Objective::sum}) {
    for (int trial = 0; trial < 10; ++trial) {
      ComplexVector psi(32), dir(32);
      for (int n = 0; n < 32; ++n) {
        psi(n) = cplx(normal(rng), normal(rng)) * std::exp(-0.1 * n);
        dir(n) = cplx(normal(rng), normal(rng));
      }
      psi.normalize();
      const auto at = fock_objective(obj, psi, ops);
      dir.normalize();
      const double h = 1e-4;
      auto f = [&](double t) { return fock_objective(obj, psi + t * dir, ops).value; };
      // Fourth-order central difference.
      const double fd = (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
      const double analytic = at.gradient.dot(dir).real();
      CHECK(std::abs(analytic - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      // Tangent to the sphere and to the phase orbit.
      CHECK(std::abs(psi.dot(at.gradient)) < 1e-10 * std::max(1.0, at.gradient.norm()));
    }
  }
}

TEST_CASE("Fock search reaches the triple bound", "[extremal]") {
  const auto r = minimize_fock(Objective::product, 64, 20, 7);
  CHECK(std::abs(r.best_value - kXiTriple) < 1e-5);
  CHECK(r.best_value >= kXiTriple - 1e-6);
  REQUIRE(r.digest);
  CHECK(r.converged);
  CHECK(r.digest->stationarity < 1e-5);
  CHECK(r.digest->overlap_xi > 1.0 - 1e-4);
  CHECK(xi_cov_deviation(r.digest->qq, r.digest->qp, r.digest->pp) < 1e-4);
  CHECK(r.digest->edge_weight < 1e-6);

  // Agreement with the Gaussian engine.
  const auto g = minimize_gaussian(Objective::product, {}, 1e-8);
  CHECK(std::abs(r.best_value - g.best_value) < 1e-5);
  const Mat2 gc = g.params->state().cov();
  CHECK(std::abs(r.digest->qq - gc(0, 0)) < 1e-4);
  CHECK(std::abs(r.digest->qp - gc(0, 1)) < 1e-4);
  CHECK(std::abs(r.digest->pp - gc(1, 1)) < 1e-4);

  const auto s = minimize_fock(Objective::sum, 48, 4, 9);
  CHECK(std::abs(s.best_value - kSqrt3) < 1e-5);
  CHECK(s.digest->overlap_xi > 1.0 - 1e-4);

  CHECK_THROWS_AS(minimize_fock(Objective::product, 16, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(minimize_fock(Objective::product, 64, 0, 0), std::invalid_argument);
}

TEST_CASE("first excited extremal state is a saddle", "[extremal]") {
  const auto ops = build_operators(64);
  const auto one = build_extremal_state(1, {}, 64).state;
  CHECK(fock_objective(Objective::product, one.amplitudes(), ops).value ==
        Approx(kFirstExcitedTriple).epsilon(1e-9));
  CHECK(stationarity_residual(one, ops) < 1e-7);

  FockSearchOptions opt;
  opt.start = one.amplitudes();
  const auto r = minimize_fock(Objective::product, 64, 1, 5, 1.0, opt);
  CHECK(r.start_value == Approx(kFirstExcitedTriple).epsilon(1e-2));
  CHECK(r.best_value < kFirstExcitedTriple);
  CHECK(std::abs(r.best_value - kXiTriple) < 1e-5);
}

TEST_CASE("Fock search is independent of the worker count", "[extremal]") {
  const char* saved = std::getenv("TRIPLE_LAB_THREADS");
  const std::string restore = saved ? saved : "";
  setenv("TRIPLE_LAB_THREADS", "1", 1);
  const auto a = minimize_fock(Objective::product, 32, 4, 21);
  setenv("TRIPLE_LAB_THREADS", "3", 1);
  const auto b = minimize_fock(Objective::product, 32, 4, 21);
  if (saved)
    setenv("TRIPLE_LAB_THREADS", restore.c_str(), 1);
  else
    unsetenv("TRIPLE_LAB_THREADS");
  CHECK(a.best_value == b.best_value);
  CHECK(a.iterations == b.iterations);
  CHECK(a.digest->qp == b.digest->qp);
}

TEST_CASE("Gaussian entropy sums respect the conjectured bound", "[extremal]") {
  const auto rep = entropy_conjecture_scan(EntropyFamily::gaussian, 10000, 42);
  CHECK(rep.samples.size() == 10000);
  CHECK(rep.violations == 0);
  CHECK(rep.failed == 0);
  CHECK(rep.minimum >= kEntropyBound - 1e-6);
  REQUIRE(rep.refined_minimum);
  CHECK(std::abs(*rep.refined_minimum - kEntropyBound) < 1e-9);
  const Mat2& c = *rep.refined_cov;
  CHECK(xi_cov_deviation(c(0, 0), c(0, 1), c(1, 1)) < 1e-6);
  CHECK(kEntropyBound > kPairImpliedEntropy);
  CHECK(entropy_bound() == Approx(kEntropyBound).epsilon(1e-14));
  CHECK(pair_implied_entropy_bound() == Approx(kPairImpliedEntropy).epsilon(1e-14));
  CHECK_THROWS_AS(entropy_conjecture_scan(EntropyFamily::gaussian, 0, 1), std::invalid_argument);
}

TEST_CASE("quadrature entropies match closed forms", "[extremal]") {
  const HermiteTable table(-8.0, 8.0, 2e-3, 63);
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(64);
  vac(0) = 1.0;
  const auto ev = fock_entropies(vac, table, 1.0);
  CHECK(ev.ok);
  CHECK(ev.sum == Approx(kVacuumEntropySum).margin(1e-6));
  CHECK(ev.s_q == Approx(ev.s_p).margin(1e-9));

  const auto xi = build_extremal_state(0, {}, 64).state;
  const auto ex = fock_entropies(xi.amplitudes(), table, 1.0);
  CHECK(ex.ok);
  CHECK(ex.sum == Approx(kEntropyBound).margin(1e-6));
  CHECK(ex.s_q == Approx(entropy_sum(xi_state()) / 3.0).margin(1e-6));
}

TEST_CASE("low-level Fock superpositions respect the conjectured bound", "[extremal]") {
  const auto rep = entropy_conjecture_scan(EntropyFamily::fock, 1000, 42);
  CHECK(rep.violations == 0);
  CHECK(rep.failed == 0);
  CHECK(rep.minimum >= kEntropyBound - 1e-6);
  CHECK_FALSE(rep.refined_minimum.has_value());
  for (const auto& s : rep.samples) CHECK(s.mass_deficit < 1e-6);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "hjlab/weak_kam.hpp"

using namespace hjlab;

namespace {

constexpr double pi = 3.14159265358979323846264338328;

GridFunction random_profile(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  const double a = 0.15 * amp(rng);
  const double b = 0.07 * amp(rng);
  const double c = 0.5 * amp(rng);
  const double phase = amp(rng);
  return GridFunction::sample(n, [=](double x) {
    return a * std::sin(two_pi * x + phase) + b * std::cos(2 * two_pi * x) +
           c * std::min(x, 1.0 - x);
  });
}

}  // namespace

TEST_CASE("stationary pendulum profile and its branch derivative") {
  const int n = 512;
  const GridFunction u = pendulum_weak_kam(n);
  CHECK(u[0] == 0.0);
  CHECK(u[n / 2] == doctest::Approx(2.0 / pi).epsilon(1e-14));
  // Arch is continuous across the derivative jump and periodic.
  CHECK(std::abs(u[n / 2 + 1] - u[n / 2 - 1]) < 4.0 / n);
  CHECK(u[n - 1] < 4.0 / n);

  const Eigen::ArrayXd d = pendulum_weak_kam_derivative(n);
  CHECK(d[0] == 0.0);
  CHECK(d[n / 2] == doctest::Approx(2.0).epsilon(1e-14));

  // The graph (x, u'(x)) sits on the unit energy level of the pendulum.
  const auto pend = Hamiltonian1D::pendulum();
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    worst = std::max(worst,
                     std::abs(pend.eval(static_cast<double>(j) / n, d[j]) - 1.0));
  CHECK(worst <= 1e-12);
}

TEST_CASE("critical value of free motion is exactly zero") {
  const WeakKamReport report =
      critical_value(Hamiltonian1D::kinetic(), GridFunction::constant(128, 0.7), 12.0);
  CHECK(report.c_estimate == 0.0);
  CHECK(report.residual == 0.0);
  CHECK(report.converged);
  REQUIRE(report.history.size() == 4);
  for (auto [T, slope] : report.history) CHECK(slope == 0.0);

  const nlohmann::json j = report.to_json();
  CHECK(j["c_estimate"] == 0.0);
  CHECK(j["converged"] == true);
}

TEST_CASE("critical value preconditions") {
  const GridFunction u0 = GridFunction::zeros(128);
  CHECK_THROWS_AS(critical_value(Hamiltonian1D::pendulum(), u0, 5.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      critical_value(Hamiltonian1D::negate(Hamiltonian1D::pendulum()), u0, 20.0),
      std::invalid_argument);
}

TEST_CASE("pendulum critical value approaches max of the potential") {
  const WeakKamReport report =
      critical_value(Hamiltonian1D::pendulum(), GridFunction::zeros(512), 20.0);
  CHECK(report.c_estimate >= 0.95);
  CHECK(report.c_estimate <= 1.05);
  CHECK(report.converged);
  CHECK(report.residual <= 0.1);
}

TEST_CASE("critical value shifts with the potential") {
  const auto lifted = Hamiltonian1D::mechanical(
      [](double x) { return std::cos(two_pi * x) + 0.5; },
      [](double x) { return -two_pi * std::sin(two_pi * x); }, "lifted-pendulum");
  const GridFunction u0 = GridFunction::zeros(256);
  const double base =
      critical_value(Hamiltonian1D::pendulum(), u0, 16.0).c_estimate;
  const double shifted = critical_value(lifted, u0, 16.0).c_estimate;
  CHECK(shifted - base == doctest::Approx(0.5).epsilon(4e-3));
  CHECK(shifted == doctest::Approx(1.5).epsilon(0.04));
}

TEST_CASE("regularity splits curvature from kinks") {
  CHECK_THROWS_AS(regularity(GridFunction::zeros(128), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(regularity(GridFunction::zeros(128), -1.0), std::invalid_argument);

  // Smooth wave: curvature extrema near +-(2 pi)^2, comfortably inside the
  // default budget.
  const RegularityReport smooth = regularity(GridFunction::cosine(256));
  CHECK(smooth.semiconcavity_c == doctest::Approx(4 * pi * pi).epsilon(1e-3));
  CHECK(smooth.semiconvexity_c == doctest::Approx(-4 * pi * pi).epsilon(1e-3));
  CHECK(smooth.c11);
  CHECK(smooth.lip == doctest::Approx(two_pi).epsilon(1e-3));

  // The stationary pendulum arch has an O(1/dx) downward kink, so it can
  // never be certified C^{1,1} however fine the grid.
  RegularityReport reports[2];
  int idx = 0;
  for (int n : {512, 1024}) {
    reports[idx] = regularity(pendulum_weak_kam(n));
    const RegularityReport& r = reports[idx++];
    CHECK(r.semiconcavity_c == doctest::Approx(two_pi).epsilon(1e-3));
    const double kink_ratio = r.semiconvexity_c / (-4.0 * n);
    CHECK(kink_ratio >= 0.8);
    CHECK(kink_ratio <= 1.2);
    CHECK_FALSE(r.c11);
  }
  CHECK_FALSE(c11_certified(reports[0], reports[1]));
  CHECK(c11_certified(smooth, regularity(GridFunction::cosine(512))));
}

TEST_CASE("evolution generates one-sided curvature bounds") {
  const auto pend = Hamiltonian1D::pendulum();
  const auto neg = Hamiltonian1D::negate(pend);
  std::mt19937 rng(777);
  for (int n : {256, 512}) {
    for (int trial = 0; trial < 5; ++trial) {
      const GridFunction u0 = random_profile(n, rng);
      const SolveParams params = make_pair_params(pend, neg, u0);
      // Convex flow: second differences bounded above, uniformly in n.
      const RegularityReport fwd = regularity(evolve(pend, u0, 0.5, params));
      CHECK(fwd.semiconcavity_c <= 50.0);
      // Concave flow: the mirrored bound from below.
      const RegularityReport bwd = regularity(evolve(neg, u0, 0.5, params));
      CHECK(bwd.semiconvexity_c >= -50.0);
    }
  }
}

TEST_CASE("variational envelope is 1/t semiconcave") {
  const int n = 256;
  const GridFunction saw = GridFunction::sawtooth(n);
  const RegularityReport hl = regularity(hopf_lax(saw, 0.25));
  CHECK(hl.semiconcavity_c <= 4.0 + 1e-9);

  const auto kin = Hamiltonian1D::kinetic();
  const RegularityReport lf =
      regularity(evolve(kin, saw, 0.25, make_params(kin, saw)));
  CHECK(lf.semiconcavity_c <= 4.0 + 10.0 / n);
}

TEST_CASE("discrete derivative: centered in the smooth region, one-sided at kinks") {
  const int n = 128;
  const Eigen::ArrayXd d_cos = discrete_derivative(GridFunction::cosine(n));
  for (int j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / n;
    CHECK(std::abs(d_cos[j] + two_pi * std::sin(two_pi * x)) <= 5e-3);
  }

  // A tent of slope 12 jump trips the kink detector; every node then reports
  // the exact branch slope.
  const GridFunction tent =
      GridFunction::sample(n, [](double x) { return 6.0 * std::min(x, 1.0 - x); });
  const Eigen::ArrayXd d_tent = discrete_derivative(tent);
  CHECK(d_tent[0] == -6.0);
  CHECK(d_tent[n / 2] == 6.0);
  for (int j = 1; j <= n / 2; ++j) CHECK(d_tent[j] == 6.0);
  for (int j = n / 2 + 1; j < n; ++j) CHECK(d_tent[j] == -6.0);
}

TEST_CASE("zero section is transversally frozen by free motion") {
  const TransverseResult r = transverse_check(
      Hamiltonian1D::kinetic(), Eigen::ArrayXd::Zero(256), {0.5, 1.0});
  CHECK(r.invariant);
  CHECK(r.alpha == 0.0);
  CHECK(r.residual == 0.0);
  CHECK(r.max_hausdorff == 0.0);
  REQUIRE(r.graph_per_time.size() == 2);
  CHECK(r.graph_per_time[0]);
  CHECK(r.graph_per_time[1]);
  CHECK(r.to_json()["invariant"] == true);
}

TEST_CASE("separatrix graph carries constant unit energy") {
  // Branchwise samples: the kink at x = 1/2 takes the analytic left value.
  const TransverseResult r = transverse_check(
      Hamiltonian1D::pendulum(), pendulum_weak_kam_derivative(256), {0.0});
  CHECK(r.alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.residual <= 1e-10);
  REQUIRE(r.graph_per_time.size() == 1);
  CHECK(r.graph_per_time[0]);  // the untouched section is a strict graph
}

TEST_CASE("zero section folds under the pendulum flow") {
  const TransverseResult r =
      transverse_check(Hamiltonian1D::pendulum(), GridFunction::zeros(512), {1.0});
  CHECK_FALSE(r.invariant);
  REQUIRE(r.graph_per_time.size() == 1);
  CHECK_FALSE(r.graph_per_time[0]);

  CHECK_THROWS_AS(transverse_check(Hamiltonian1D::pendulum(),
                                   GridFunction::zeros(128), {-1.0}),
                  std::invalid_argument);
}

TEST_CASE("joint surface fit for the free pair") {
  const auto kin = Hamiltonian1D::kinetic();
  const auto neg = Hamiltonian1D::negate(kin);
  VerdictOptions opts;
  opts.n = 128;
  const SurfaceFit fit = theorem_main_surface(
      kin, neg, [](int n) { return GridFunction::constant(n, 0.3); }, opts);
  CHECK(fit.match);
  CHECK(fit.c_h == 0.0);
  CHECK(fit.c_g == 0.0);
  CHECK(fit.sup_error == 0.0);
  // Constants agree with the independent large-time slopes, here exactly.
  CHECK(fit.alpha_h == 0.0);
  CHECK(fit.alpha_neg_g == 0.0);
  CHECK(fit.to_json()["match"] == true);
}

TEST_CASE("joint surface fit refuses obstructed pairs") {
  const auto pend = Hamiltonian1D::pendulum();
  VerdictOptions opts;
  opts.n = 128;
  CHECK_THROWS_AS(theorem_main_surface(pend, Hamiltonian1D::negate(pend),
                                       [](int n) { return GridFunction::zeros(n); },
                                       opts),
                  std::logic_error);
}

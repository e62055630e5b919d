#include <doctest.h>

#include <cmath>

#include "hjlab/multitime.hpp"
#include "hjlab/weak_kam.hpp"

using namespace hjlab;

namespace {

InitialData zero_data() {
  return [](int n) { return GridFunction::zeros(n); };
}

InitialData sawtooth_data() {
  return [](int n) { return GridFunction::sawtooth(n); };
}

}  // namespace

TEST_CASE("pair parameters take the worse of the two scans") {
  const auto pend = Hamiltonian1D::pendulum();
  const auto neg = Hamiltonian1D::negate(pend);
  const SolveParams params = make_pair_params(pend, neg, GridFunction::zeros(512));
  CHECK(params.grad_bound == 2.0);
  CHECK(params.theta == speed_bound(pend, 2.0));
}

TEST_CASE("compose with zero legs is the plain evolution") {
  const auto pend = Hamiltonian1D::pendulum();
  const auto neg = Hamiltonian1D::negate(pend);
  const GridFunction u0 = GridFunction::sawtooth(256);
  const SolveParams params = make_pair_params(pend, neg, u0);

  const GridFunction only_h = compose(pend, neg, 0.3, 0.0, u0, params);
  const GridFunction direct = evolve(pend, u0, 0.3, params);
  for (int j = 0; j < 256; ++j) CHECK(only_h[j] == direct[j]);

  const GridFunction nothing = compose(pend, neg, 0.0, 0.0, u0, params);
  for (int j = 0; j < 256; ++j) CHECK(nothing[j] == u0[j]);
}

TEST_CASE("flip route equals the direct march exactly") {
  // The scheme update commutes with negation of the datum paired with the
  // (negate, reflect) conjugation of the Hamiltonian: every floating-point
  // operation in the step is odd-symmetric. So the flip route is not merely
  // close to the direct one, it is the same bit pattern.
  const auto g = Hamiltonian1D::negate(Hamiltonian1D::kinetic());
  const GridFunction u0 = GridFunction::sawtooth(256);
  SolveParams params;
  params.grad_bound = 1.0;
  params.theta = speed_bound(Hamiltonian1D::kinetic(), 1.0);

  const GridFunction flipped = flip_solve(g, u0, 0.25, params);
  const GridFunction direct = evolve(g, u0, 0.25, params);
  for (int j = 0; j < 256; ++j) CHECK(flipped[j] == direct[j]);

  // s = 0 short-circuits to the datum.
  const GridFunction still = flip_solve(g, u0, 0.0, params);
  for (int j = 0; j < 256; ++j) CHECK(still[j] == u0[j]);
}

TEST_CASE("flip route against the descending pendulum") {
  // G = -(p^2/2 + cos) from u0 = 0 must be the negation of the ascending
  // problem from 0; both sides here are computed, not assumed.
  const auto pend = Hamiltonian1D::pendulum();
  const auto g = Hamiltonian1D::negate(pend);
  const GridFunction zero = GridFunction::zeros(256);
  const SolveParams params = make_pair_params(pend, g, zero);

  const GridFunction flipped = flip_solve(g, zero, 0.4, params);
  const GridFunction mirror{-evolve(pend, zero, 0.4, params).values()};
  CHECK(sup_dist(flipped, mirror) <= 1e-15);
}

TEST_CASE("concave solve matches its variational formula") {
  // For G = -p^2/2 the solution is the backward Hopf-Lax envelope
  // max_y { u0(y) - |x-y|^2 / (2 s) }, i.e. the negated forward formula
  // applied to -u0.
  const int n = 256;
  const auto g = Hamiltonian1D::negate(Hamiltonian1D::kinetic());
  const GridFunction u0 = GridFunction::sawtooth(n);
  SolveParams params;
  params.grad_bound = 1.0;
  params.theta = speed_bound(Hamiltonian1D::kinetic(), 1.0);

  const GridFunction numeric = flip_solve(g, u0, 0.25, params);
  const GridFunction oracle{-hopf_lax(GridFunction(-u0.values()), 0.25).values()};
  CHECK(sup_dist(numeric, oracle) <= 3.0 * std::sqrt(1.0 / n));
}

TEST_CASE("commutation defect vanishes identically for the free pair") {
  const auto kin = Hamiltonian1D::kinetic();
  const auto neg = Hamiltonian1D::negate(kin);
  const GridFunction u0 = GridFunction::constant(256, 0.3);
  const SolveParams params = make_pair_params(kin, neg, u0);

  const MultiTimeReport report = commutation_defect(
      kin, neg, u0, {0.0, 0.25, 0.5}, {0.0, 0.25, 0.5}, params);
  CHECK(report.max_defect == 0.0);
  CHECK(report.defect_l1.maxCoeff() == 0.0);
}

TEST_CASE("zero row and column of the defect table are exact") {
  const auto pend = Hamiltonian1D::pendulum();
  const auto neg = Hamiltonian1D::negate(pend);
  const GridFunction u0 = GridFunction::zeros(256);
  const SolveParams params = make_pair_params(pend, neg, u0);

  const MultiTimeReport report = commutation_defect(
      pend, neg, u0, {0.0, 0.25, 0.5}, {0.0, 0.25, 0.5}, params);
  for (int i = 0; i < 3; ++i) {
    CHECK(report.defect(i, 0) == 0.0);
    CHECK(report.defect(0, i) == 0.0);
  }
  CHECK(report.max_defect > 0.0);  // the genuine cells do not vanish
  CHECK(report.argmax_t > 0);
  CHECK(report.argmax_s > 0);
}

TEST_CASE("self-commutation defect is pure splitting noise") {
  const auto pend = Hamiltonian1D::pendulum();
  const GridFunction u0 = GridFunction::sawtooth(256);
  const SolveParams params = make_pair_params(pend, pend, u0);
  const MultiTimeReport report = commutation_defect(
      pend, pend, u0, {0.0, 0.25, 0.5}, {0.0, 0.25, 0.5}, params);
  // Both orders take the same steps up to how the fractional remainders
  // interleave; the residue is orders of magnitude below the scheme error.
  CHECK(report.max_defect <= 1e-4);
}

TEST_CASE("defect grids must be sane") {
  const auto kin = Hamiltonian1D::kinetic();
  const auto neg = Hamiltonian1D::negate(kin);
  const GridFunction u0 = GridFunction::constant(128, 0.0);
  const SolveParams params = make_pair_params(kin, neg, u0);
  CHECK_THROWS_AS(
      commutation_defect(kin, neg, u0, {0.25, 0.5}, {0.0, 0.5}, params),
      std::invalid_argument);
  CHECK_THROWS_AS(
      commutation_defect(kin, neg, u0, {0.0, 0.5, 0.5}, {0.0, 0.5}, params),
      std::invalid_argument);
  CHECK_THROWS_AS(commutation_defect_refined(kin, neg, nullptr, 128, {0.0},
                                             {0.0}),
                  std::invalid_argument);
}

TEST_CASE("refined defect carries both levels") {
  const auto pend = Hamiltonian1D::pendulum();
  const auto neg = Hamiltonian1D::negate(pend);
  const MultiTimeReport report = commutation_defect_refined(
      pend, neg, zero_data(), 128, {0.0, 0.25}, {0.0, 0.25});
  REQUIRE(report.refinement.size() == 2);
  CHECK(report.refinement[0].first == 128);
  CHECK(report.refinement[1].first == 256);
  CHECK(report.refinement[1].second == report.max_defect);
  // The obstruction survives refinement instead of collapsing with dx.
  CHECK(report.refinement[1].second > 0.3 * report.refinement[0].second);
}

TEST_CASE("verdict: free pair carries an exact joint surface") {
  const auto kin = Hamiltonian1D::kinetic();
  const auto neg = Hamiltonian1D::negate(kin);
  VerdictOptions opts;
  opts.n = 128;
  const MultiTimeVerdict v = multitime_verdict(
      kin, neg, [](int n) { return GridFunction::constant(n, 0.3); }, opts);
  CHECK(v.kind == VerdictKind::exists_evidence);
  CHECK(v.defect_coarse == 0.0);
  CHECK(v.defect_fine == 0.0);
  CHECK(v.ratio == 0.0);
  CHECK(v.c_h == 0.0);
  CHECK(v.c_g == 0.0);
  CHECK(v.surface_error == 0.0);
  CHECK(v.surface_tolerance == 1e-12);

  const nlohmann::json j = v.to_json();
  CHECK(j["verdict"] == "exists_evidence");
  CHECK(j["c_H"] == 0.0);
  CHECK(j["c_G"] == 0.0);
}

TEST_CASE("verdict: opposed pendulums obstruct") {
  const auto pend = Hamiltonian1D::pendulum();
  const auto neg = Hamiltonian1D::negate(pend);
  VerdictOptions opts;
  opts.n = 128;
  const MultiTimeVerdict v = multitime_verdict(pend, neg, zero_data(), opts);
  CHECK(v.kind == VerdictKind::nonexistence_evidence);
  CHECK(v.ratio > 0.5);
  CHECK(v.defect_fine > 10.0 * v.baseline);
  CHECK(v.to_json()["verdict"] == "nonexistence_evidence");
  CHECK_FALSE(v.to_json().contains("c_H"));
}

TEST_CASE("verdict preconditions") {
  const auto pend = Hamiltonian1D::pendulum();
  // Wrong curvature on the second slot.
  CHECK_THROWS_AS(multitime_verdict(pend, pend, zero_data()),
                  std::invalid_argument);
  // Wrong curvature on the first slot.
  CHECK_THROWS_AS(
      multitime_verdict(Hamiltonian1D::negate(pend), pend, zero_data()),
      std::invalid_argument);
  // Curvatures fit but the bracket does not vanish: shifted potential.
  const auto shifted = Hamiltonian1D::mechanical(
      [](double x) { return std::cos(two_pi * x + 0.7); },
      [](double x) { return -two_pi * std::sin(two_pi * x + 0.7); },
      "shifted-well");
  CHECK_THROWS_AS(
      multitime_verdict(pend, Hamiltonian1D::negate(shifted), sawtooth_data()),
      std::invalid_argument);
}

#include <doctest.h>

#include <cmath>

#include "hjlab/flow.hpp"

using namespace hjlab;

namespace {
constexpr double pi = 3.14159265358979323846264338328;
}

TEST_CASE("free motion integrates exactly") {
  const auto kin = Hamiltonian1D::kinetic();
  const FlowState s = flow_step(kin, {0.2, 0.5}, 0.1);
  CHECK(s.x == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s.p == 0.5);

  // Winding: x wraps back into [0, 1).
  const FlowState far = integrate_flow(kin, {0.0, 1.0}, 2.5, 1e-3);
  CHECK(far.x == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(far.p == 1.0);
}

TEST_CASE("pendulum fixed points stay put") {
  const auto h = Hamiltonian1D::pendulum();
  // Hyperbolic point: sin(0) vanishes exactly, so the orbit is frozen.
  const FlowState top = integrate_flow(h, {0.0, 0.0}, 10.0, 1e-3);
  CHECK(top.x == 0.0);
  CHECK(top.p == 0.0);
  // Elliptic point: sin(pi) is only zero up to rounding; stays within dust.
  const FlowState bottom = integrate_flow(h, {0.5, 0.0}, 1.0, 1e-3);
  CHECK(std::abs(bottom.x - 0.5) <= 1e-12);
  CHECK(std::abs(bottom.p) <= 1e-12);
}

TEST_CASE("energy drift stays below 1e-6 for dt = 1e-3 up to t = 10") {
  const std::vector<Hamiltonian1D> catalog = {
      Hamiltonian1D::pendulum(),
      Hamiltonian1D::kinetic(),
      Hamiltonian1D::negate(Hamiltonian1D::pendulum()),
      Hamiltonian1D::reflect(Hamiltonian1D::pendulum()),
      Hamiltonian1D::mechanical(
          [](double x) { return std::cos(two_pi * x) + 0.5; },
          [](double x) { return -two_pi * std::sin(two_pi * x); }),
  };
  const std::vector<FlowState> starts = {{0.25, 1.9}, {0.1, 0.3}, {0.6, -1.2}};
  for (const auto& h : catalog) {
    for (const FlowState& s0 : starts) {
      const double e0 = h.eval(s0.x, s0.p);
      const FlowState s1 = integrate_flow(h, s0, 10.0, 1e-3);
      CAPTURE(h.name());
      CAPTURE(s0.x);
      CHECK(std::abs(h.eval(s1.x, s1.p) - e0) <= 1e-6);
    }
  }
}

TEST_CASE("separatrix energy is conserved along the weak KAM graph") {
  const int n = 256;
  const auto h = Hamiltonian1D::pendulum();
  Eigen::ArrayXd deriv(n);
  for (int j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / n;
    deriv[j] = (x <= 0.5 ? 2.0 : -2.0) * std::sin(pi * x);
  }
  const PushedCloud pushed = push_graph(h, GraphCloud::over_nodes(deriv), 1.0, 1e-3);
  for (Eigen::Index j = 0; j < n; ++j) {
    CHECK(std::abs(h.eval(pushed.cloud.x[j], pushed.cloud.p[j]) - 1.0) <= 1e-6);
  }
}

TEST_CASE("zero section under free motion is frozen") {
  const auto kin = Hamiltonian1D::kinetic();
  const GraphCloud cloud = GraphCloud::over_nodes(Eigen::ArrayXd::Zero(128));
  const PushedCloud pushed = push_graph(kin, cloud, 1.0, 1e-3);
  CHECK(pushed.is_graph);
  CHECK(pushed.graph_distortion == 0.0);
  for (Eigen::Index j = 0; j < 128; ++j) {
    CHECK(pushed.cloud.x[j] == cloud.x[j]);
    CHECK(pushed.cloud.p[j] == 0.0);
  }
}

TEST_CASE("uniform translation keeps the graph") {
  const auto kin = Hamiltonian1D::kinetic();
  const GraphCloud cloud = GraphCloud::over_nodes(Eigen::ArrayXd::Constant(128, 1.0));
  const PushedCloud pushed = push_graph(kin, cloud, 2.3, 1e-3);
  CHECK(pushed.is_graph);
  for (Eigen::Index j = 0; j < 128; ++j)
    CHECK(pushed.lifted_x[j] == doctest::Approx(cloud.x[j] + 2.3).epsilon(1e-12));
}

TEST_CASE("pendulum folds the zero section by t = 1") {
  const auto h = Hamiltonian1D::pendulum();
  const GraphCloud cloud = GraphCloud::over_nodes(Eigen::ArrayXd::Zero(512));
  const PushedCloud pushed = push_graph(h, cloud, 1.0, 1e-3);
  CHECK_FALSE(pushed.is_graph);
  CHECK(pushed.graph_distortion > 0.0);
}

TEST_CASE("flow input validation") {
  const auto h = Hamiltonian1D::pendulum();
  CHECK_THROWS_AS(flow_step(h, {std::nan(""), 0.0}, 0.1), std::domain_error);
  CHECK_THROWS_AS(integrate_flow(h, {0.0, 0.0}, -1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(integrate_flow(h, {0.0, 0.0}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GraphCloud::over_nodes(Eigen::ArrayXd::Zero(1)), std::invalid_argument);
}

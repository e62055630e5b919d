#include "hjlab/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace hjlab {

namespace {

struct Lifted {
  double x;  // not wrapped
  double p;
};

Lifted rk4_step(const Hamiltonian1D& h, Lifted s, double dt) {
  auto f = [&h](double x, double p) -> Lifted {
    Partials d = h.partials(x, p);
    return {d.dp, -d.dx};
  };
  const Lifted k1 = f(s.x, s.p);
  const Lifted k2 = f(s.x + 0.5 * dt * k1.x, s.p + 0.5 * dt * k1.p);
  const Lifted k3 = f(s.x + 0.5 * dt * k2.x, s.p + 0.5 * dt * k2.p);
  const Lifted k4 = f(s.x + dt * k3.x, s.p + dt * k3.p);
  return {s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          s.p + dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

Lifted integrate_lifted(const Hamiltonian1D& h, Lifted s, double t, double dt) {
  if (!std::isfinite(s.x) || !std::isfinite(s.p))
    throw std::domain_error("flow: non-finite state");
  if (!(t >= 0.0) || !std::isfinite(t) || !(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("flow: need t >= 0 and dt > 0");
  auto steps = static_cast<long long>(t / dt);
  double done = steps * dt;
  for (long long k = 0; k < steps; ++k) s = rk4_step(h, s, dt);
  if (done < t) s = rk4_step(h, s, t - done);
  if (!std::isfinite(s.x) || !std::isfinite(s.p))
    throw std::runtime_error("flow: trajectory blew up");
  return s;
}

double wrap(double x) { return x - std::floor(x); }

}  // namespace

GraphCloud GraphCloud::over_nodes(const Eigen::ArrayXd& derivative_samples) {
  const Eigen::Index n = derivative_samples.size();
  if (n < 2) throw std::invalid_argument("GraphCloud: need at least 2 points");
  if (!derivative_samples.isFinite().all())
    throw std::invalid_argument("GraphCloud: non-finite sample");
  GraphCloud c;
  c.x = Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1) / n);
  c.p = derivative_samples;
  return c;
}

FlowState flow_step(const Hamiltonian1D& h, FlowState s, double dt) {
  if (!std::isfinite(s.x) || !std::isfinite(s.p))
    throw std::domain_error("flow_step: non-finite state");
  if (!std::isfinite(dt)) throw std::invalid_argument("flow_step: bad dt");
  Lifted out = rk4_step(h, {s.x, s.p}, dt);
  if (!std::isfinite(out.x) || !std::isfinite(out.p))
    throw std::runtime_error("flow_step: non-finite result");
  return {wrap(out.x), out.p};
}

FlowState integrate_flow(const Hamiltonian1D& h, FlowState s, double t, double dt) {
  Lifted out = integrate_lifted(h, {s.x, s.p}, t, dt);
  return {wrap(out.x), out.p};
}

PushedCloud push_graph(const Hamiltonian1D& h, const GraphCloud& cloud,
                       double t, double dt) {
  const Eigen::Index n = cloud.size();
  if (n < 2 || cloud.p.size() != n)
    throw std::invalid_argument("push_graph: malformed cloud");
  PushedCloud out;
  out.lifted_x.resize(n);
  out.cloud.x.resize(n);
  out.cloud.p.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Lifted s = integrate_lifted(h, {cloud.x[i], cloud.p[i]}, t, dt);
    out.lifted_x[i] = s.x;
    out.cloud.x[i] = wrap(s.x);
    out.cloud.p[i] = s.p;
  }
  // The image is a graph iff consecutive lifted positions keep their strict
  // cyclic order: gaps g_i = X_{i+1} - X_i > 0 and the closing gap
  // X_0 + 1 - X_{n-1} > 0 (the cloud covers one period).
  out.is_graph = true;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double gap = (i + 1 < n) ? out.lifted_x[i + 1] - out.lifted_x[i]
                                   : out.lifted_x[0] + 1.0 - out.lifted_x[n - 1];
    if (!(gap > 0.0)) out.is_graph = false;
    worst = std::min(worst, gap);
  }
  out.graph_distortion = std::max(0.0, -worst);
  return out;
}

}  // namespace hjlab

#include "hjlab/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "hjlab/flow.hpp"

namespace hjlab {

namespace {

// Scan lattice p = k / 20 (step 0.05, cap 50). Dividing by 20 instead of
// multiplying by 0.05 keeps integer radii like 2.0 exact.
constexpr double kScanPerUnit = 20.0;
constexpr int kScanCapSteps = 1000;
constexpr int kScanX = 256;

double inf_over_x(const Hamiltonian1D& h, double p) {
  double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanX; ++i)
    inf = std::min(inf, h.eval(static_cast<double>(i) / kScanX, p));
  return inf;
}

double sup_abs_over_x(const Hamiltonian1D& h, double p) {
  double sup = 0.0;
  for (int i = 0; i < kScanX; ++i)
    sup = std::max(sup, std::abs(h.eval(static_cast<double>(i) / kScanX, p)));
  return sup;
}

void check_params(const SolveParams& params) {
  if (!(params.cfl > 0.0) || !(params.cfl <= 0.5))
    throw std::invalid_argument("SolveParams: cfl must lie in (0, 0.5]");
  if (!(params.theta >= 0.0) || !std::isfinite(params.theta))
    throw std::invalid_argument("SolveParams: theta must be finite and >= 0");
}

}  // namespace

double grad_bound(const Hamiltonian1D& h, const GridFunction& u0) {
  Hamiltonian1D scan;
  switch (h.coercivity()) {
    case Coercivity::coercive:
      scan = h;
      break;
    case Coercivity::anti_coercive:
      scan = Hamiltonian1D::reflect(Hamiltonian1D::negate(h));
      break;
    case Coercivity::none:
      throw CoercivityError("grad_bound: " + h.name() +
                            " is coercive in neither orientation");
  }

  const double lip0 = lipschitz_constant(u0);

  // Sampled sup of |H| over the gradient range of the initial data.
  double barrier = sup_abs_over_x(scan, 0.0);
  for (int k = 1;; ++k) {
    const double q = std::min(k / kScanPerUnit, lip0);
    barrier = std::max(barrier, sup_abs_over_x(scan, q));
    barrier = std::max(barrier, sup_abs_over_x(scan, -q));
    if (q == lip0) break;
  }

  // Outward scan: find the last lattice radius where H fails to clear the
  // barrier. Beyond it, coercivity traps the gradient.
  int last_bad = 0;
  for (int k = 1; k <= kScanCapSteps; ++k) {
    const double p = k / kScanPerUnit;
    const bool clears = inf_over_x(scan, p) > barrier && inf_over_x(scan, -p) > barrier;
    if (!clears) last_bad = k;
  }
  if (last_bad == kScanCapSteps)
    throw CoercivityError("grad_bound: scan hit the cap at |p| = 50; " +
                          h.name() + " looks mis-tagged");
  return std::max(lip0, last_bad / kScanPerUnit);
}

SolveParams make_params(const Hamiltonian1D& h, const GridFunction& u0,
                        double cfl) {
  SolveParams params;
  params.cfl = cfl;
  params.grad_bound = grad_bound(h, u0);
  params.theta = speed_bound(h, params.grad_bound);
  check_params(params);
  return params;
}

double time_step(const SolveParams& params, double dx) {
  return params.cfl * dx / std::max(params.theta, 1.0);
}

GridFunction lf_step(const Hamiltonian1D& h, const GridFunction& u,
                     double theta, double dt) {
  if (!(dt >= 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("lf_step: bad dt");
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("lf_step: bad theta");
  const int n = u.size();
  const double dx = u.dx();
  // Monotonicity needs dt * theta <= dx; the run parameters stay at or below
  // half of that. The tiny slack forgives fractional-step rounding.
  if (dt * std::max(theta, 1.0) > 0.5 * dx * (1.0 + 1e-9))
    throw std::invalid_argument("lf_step: dt violates the CFL bound");

  const double inv_dx = static_cast<double>(n);
  Eigen::ArrayXd out(n);
  for (int j = 0; j < n; ++j) {
    const int jp = j + 1 == n ? 0 : j + 1;
    const int jm = j == 0 ? n - 1 : j - 1;
    const double dplus = (u[jp] - u[j]) * inv_dx;
    const double dminus = (u[j] - u[jm]) * inv_dx;
    const double x = static_cast<double>(j) / n;
    out[j] = u[j] - dt * (h.eval(x, 0.5 * (dplus + dminus)) -
                          0.5 * theta * (dplus - dminus));
  }
  if (!out.isFinite().all())
    throw std::runtime_error("lf_step: scheme produced non-finite values");
  return GridFunction(std::move(out));
}

GridFunction evolve(const Hamiltonian1D& h, const GridFunction& u0, double t,
                    const SolveParams& params) {
  check_params(params);
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("evolve: need finite t >= 0");
  if (t == 0.0) return u0;

  const double dt = time_step(params, u0.dx());
  const auto steps = static_cast<long long>(t / dt);
  GridFunction u = u0;
  for (long long k = 0; k < steps; ++k) u = lf_step(h, u, params.theta, dt);
  const double rem = t - steps * dt;
  if (rem > 0.0) u = lf_step(h, u, params.theta, rem);
  return u;
}

TimeSlab evolve_record(const Hamiltonian1D& h, const GridFunction& u0,
                       const SolveParams& params) {
  const auto& times = params.record_times;
  if (times.empty() || times.front() != 0.0)
    throw std::invalid_argument("evolve_record: record_times must start at 0");
  for (size_t k = 0; k + 1 < times.size(); ++k)
    if (!(times[k] < times[k + 1]))
      throw std::invalid_argument("evolve_record: record_times must increase");
  if (!std::isfinite(times.back()))
    throw std::invalid_argument("evolve_record: non-finite record time");

  TimeSlab slab;
  slab.times = times;
  slab.values.resize(u0.size(), static_cast<Eigen::Index>(times.size()));
  GridFunction u = u0;
  slab.values.col(0) = u.values().matrix();
  for (size_t k = 1; k < times.size(); ++k) {
    u = evolve(h, u, times[k] - times[k - 1], params);
    slab.values.col(static_cast<Eigen::Index>(k)) = u.values().matrix();
  }
  return slab;
}

GridFunction hopf_lax(const GridFunction& u0, double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("hopf_lax: need t > 0");
  const int n = u0.size();
  const double inv_2t = 0.5 / t;
  Eigen::ArrayXd out(n);
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / n;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      const double y = static_cast<double>(k) / n;
      for (int shift = -1; shift <= 1; ++shift) {
        const double d = x - y - shift;
        best = std::min(best, u0[k] + d * d * inv_2t);
      }
    }
    out[i] = best;
  }
  return GridFunction(std::move(out));
}

TimeSlab sup_convolution_time(const TimeSlab& v, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("sup_convolution_time: need delta > 0");
  const auto kcols = static_cast<Eigen::Index>(v.times.size());
  if (kcols == 0 || v.values.cols() != kcols)
    throw std::invalid_argument("sup_convolution_time: malformed slab");

  TimeSlab out;
  out.times = v.times;
  out.values.resize(v.values.rows(), kcols);
  for (Eigen::Index i = 0; i < kcols; ++i) {
    Eigen::ArrayXd acc =
        Eigen::ArrayXd::Constant(v.values.rows(), -std::numeric_limits<double>::infinity());
    for (Eigen::Index k = 0; k < kcols; ++k) {
      const double penalty = std::abs(v.times[i] - v.times[k]) / delta;
      acc = acc.max(v.values.col(k).array() - penalty);
    }
    out.values.col(i) = acc.matrix();
  }
  return out;
}

}  // namespace hjlab

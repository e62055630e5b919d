#include "hjlab/weak_kam.hpp"

#include <cmath>
#include <stdexcept>

namespace hjlab {

namespace {

constexpr double pi = 3.14159265358979323846264338328;

double hausdorff_distance(const GraphCloud& a, const GraphCloud& b) {
  const auto torus_metric = [](double x1, double p1, double x2, double p2) {
    double w = std::abs(x1 - x2);
    w = std::min(w, 1.0 - w);
    const double dp = p1 - p2;
    return std::sqrt(w * w + dp * dp);
  };
  const auto directed = [&](const GraphCloud& from, const GraphCloud& to) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < from.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < to.size(); ++j)
        best = std::min(best, torus_metric(from.x[i], from.p[i], to.x[j], to.p[j]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace

GridFunction pendulum_weak_kam(int n) {
  return GridFunction::sample(n, [](double x) {
    return x <= 0.5 ? (2.0 / pi) * (1.0 - std::cos(pi * x))
                    : (2.0 / pi) * (1.0 + std::cos(pi * x));
  });
}

Eigen::ArrayXd pendulum_weak_kam_derivative(int n) {
  Eigen::ArrayXd d(n);
  for (int j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / n;
    d[j] = x <= 0.5 ? 2.0 * std::sin(pi * x) : -2.0 * std::sin(pi * x);
  }
  return d;
}

WeakKamReport critical_value(const Hamiltonian1D& h, const GridFunction& u0,
                             double T, double cfl) {
  if (h.convexity() != Convexity::tonelli_convex)
    throw std::invalid_argument("critical_value: H must be Tonelli convex");
  if (!(T >= 10.0) || !std::isfinite(T))
    throw std::invalid_argument("critical_value: need T >= 10");

  const SolveParams params = make_params(h, u0, cfl);

  // March through tau_m - 1 and tau_m for the four checkpoints.
  std::vector<double> stops;
  for (int m = 1; m <= 4; ++m) {
    stops.push_back(m * T / 4.0 - 1.0);
    stops.push_back(m * T / 4.0);
  }
  GridFunction u = u0;
  double now = 0.0;
  std::vector<GridFunction> at_stop;
  for (double target : stops) {
    u = evolve(h, u, target - now, params);
    now = target;
    at_stop.push_back(u);
  }

  WeakKamReport report;
  for (int m = 0; m < 4; ++m) {
    const double tau = (m + 1) * T / 4.0;
    const double slope =
        (at_stop[2 * m].values() - at_stop[2 * m + 1].values()).mean();
    report.history.emplace_back(tau, slope);
  }
  report.c_estimate = report.history[3].second;
  report.converged =
      std::abs(report.history[3].second - report.history[2].second) < 1e-3;

  // With the right constant, u(tau) + c tau should be stationary across the
  // checkpoints.
  const double c = report.c_estimate;
  for (int m = 0; m < 3; ++m) {
    const double tau0 = (m + 1) * T / 4.0;
    const double tau1 = (m + 2) * T / 4.0;
    const Eigen::ArrayXd diff =
        (at_stop[2 * m + 1].values() + c * tau0) -
        (at_stop[2 * m + 3].values() + c * tau1);
    report.residual = std::max(report.residual, diff.abs().maxCoeff());
  }
  return report;
}

RegularityReport regularity(const GridFunction& u, double budget) {
  if (!(budget > 0.0) || !std::isfinite(budget))
    throw std::invalid_argument("regularity: budget must be positive");
  const Eigen::ArrayXd s = second_differences(u);
  RegularityReport r;
  r.semiconcavity_c = s.maxCoeff();
  r.semiconvexity_c = s.minCoeff();
  r.lip = lipschitz_constant(u);
  r.budget = budget;
  r.c11 = std::max(std::abs(r.semiconcavity_c), std::abs(r.semiconvexity_c)) <= budget;
  return r;
}

bool c11_certified(const RegularityReport& coarse, const RegularityReport& fine) {
  return coarse.c11 && fine.c11;
}

Eigen::ArrayXd discrete_derivative(const GridFunction& v) {
  const int n = v.size();
  const Eigen::ArrayXd s = second_differences(v);
  const double kink_threshold = 10.0 * n;  // 10 / dx
  Eigen::ArrayXd d(n);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const int jm = (j + n - 1) % n;
    if (std::abs(s[j]) > kink_threshold)
      d[j] = (v[j] - v[jm]) * n;  // one-sided into the left branch
    else
      d[j] = (v[jp] - v[jm]) * 0.5 * n;
  }
  return d;
}

TransverseResult transverse_check(const Hamiltonian1D& h,
                                  const Eigen::ArrayXd& derivative_samples,
                                  const std::vector<double>& times,
                                  double tol, double dt) {
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t))
      throw std::invalid_argument("transverse_check: bad time");

  const GraphCloud cloud = GraphCloud::over_nodes(derivative_samples);
  const auto n = cloud.size();

  TransverseResult result;
  Eigen::ArrayXd energy(n);
  for (Eigen::Index j = 0; j < n; ++j) energy[j] = h.eval(cloud.x[j], cloud.p[j]);
  result.alpha = energy.mean();
  result.residual = (energy - result.alpha).abs().maxCoeff();

  bool all_graphs = true;
  for (double t : times) {
    const PushedCloud pushed = push_graph(h, cloud, t, dt);
    result.graph_per_time.push_back(pushed.is_graph);
    all_graphs = all_graphs && pushed.is_graph;
    result.max_hausdorff =
        std::max(result.max_hausdorff, hausdorff_distance(pushed.cloud, cloud));
  }
  result.invariant = all_graphs && result.max_hausdorff <= tol;
  return result;
}

TransverseResult transverse_check(const Hamiltonian1D& h, const GridFunction& v,
                                  const std::vector<double>& times,
                                  double tol, double dt) {
  return transverse_check(h, discrete_derivative(v), times, tol, dt);
}

SurfaceFit theorem_main_surface(const Hamiltonian1D& h, const Hamiltonian1D& g,
                                const InitialData& u0,
                                const VerdictOptions& opts) {
  const MultiTimeVerdict verdict = multitime_verdict(h, g, u0, opts);
  if (verdict.kind != VerdictKind::exists_evidence)
    throw std::logic_error(
        "theorem_main_surface: verdict is nonexistence_evidence");

  SurfaceFit fit;
  fit.c_h = verdict.c_h;
  fit.c_g = verdict.c_g;
  fit.sup_error = verdict.surface_error;
  fit.tolerance = verdict.surface_tolerance;
  fit.match = fit.sup_error <= fit.tolerance;

  const GridFunction u = u0(opts.n);
  fit.alpha_h = critical_value(h, u, 12.0, opts.cfl).c_estimate;
  fit.alpha_neg_g =
      critical_value(Hamiltonian1D::reflect(Hamiltonian1D::negate(g)), u, 12.0,
                     opts.cfl)
          .c_estimate;
  return fit;
}

nlohmann::json WeakKamReport::to_json() const {
  nlohmann::json j;
  j["c_estimate"] = c_estimate;
  std::vector<std::vector<double>> hist;
  for (auto [T, slope] : history) hist.push_back({T, slope});
  j["history"] = hist;
  j["residual"] = residual;
  j["converged"] = converged;
  return j;
}

nlohmann::json RegularityReport::to_json() const {
  return {{"semiconcavity_C", semiconcavity_c},
          {"semiconvexity_C", semiconvexity_c},
          {"lip", lip},
          {"budget", budget},
          {"c11", c11}};
}

nlohmann::json TransverseResult::to_json() const {
  nlohmann::json j;
  j["invariant"] = invariant;
  j["alpha"] = alpha;
  j["residual"] = residual;
  j["max_hausdorff"] = max_hausdorff;
  j["graph_per_time"] = graph_per_time;
  return j;
}

nlohmann::json SurfaceFit::to_json() const {
  return {{"match", match},   {"c_H", c_h},
          {"c_G", c_g},       {"sup_error", sup_error},
          {"tolerance", tolerance}, {"alpha_H", alpha_h},
          {"alpha_negG", alpha_neg_g}};
}

}  // namespace hjlab

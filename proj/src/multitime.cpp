#include "hjlab/multitime.hpp"

#include <cmath>
#include <stdexcept>

namespace hjlab {

namespace {

void check_time_grid(const std::vector<double>& grid, const char* which) {
  if (grid.empty() || grid.front() != 0.0)
    throw std::invalid_argument(std::string("commutation_defect: ") + which +
                                " grid must start at 0");
  for (size_t k = 0; k + 1 < grid.size(); ++k)
    if (!(grid[k] < grid[k + 1]))
      throw std::invalid_argument(std::string("commutation_defect: ") + which +
                                  " grid must increase strictly");
  if (!std::isfinite(grid.back()))
    throw std::invalid_argument("commutation_defect: non-finite grid time");
}

// Least squares through the origin of the mean displacement of the evolved
// smoothed datum against -t.
double slope_through_origin(const std::vector<double>& times,
                            const std::vector<double>& mean_drop) {
  double num = 0.0, den = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    num += times[k] * mean_drop[k];
    den += times[k] * times[k];
  }
  return (den == 0.0 || num == 0.0) ? 0.0 : -num / den;
}

// Smooth u0 by a short evolution under the convex partner, then read the
// mean drop of the evolved datum off the time grid.
double estimate_constant(const Hamiltonian1D& smoother, const Hamiltonian1D& mover,
                         const GridFunction& u0, const std::vector<double>& grid,
                         const SolveParams& params) {
  const double eps = 2.0 * u0.dx();
  const GridFunction smoothed = evolve(smoother, u0, eps, params);
  std::vector<double> times, drops;
  for (double s : grid) {
    if (s == 0.0) continue;
    const GridFunction us = evolve(mover, smoothed, s, params);
    times.push_back(s);
    drops.push_back((us.values() - smoothed.values()).mean());
  }
  return slope_through_origin(times, drops);
}

}  // namespace

SolveParams make_pair_params(const Hamiltonian1D& h, const Hamiltonian1D& g,
                             const GridFunction& u0, double cfl) {
  SolveParams params;
  params.cfl = cfl;
  params.grad_bound = std::max(grad_bound(h, u0), grad_bound(g, u0));
  params.theta = std::max(speed_bound(h, params.grad_bound),
                          speed_bound(g, params.grad_bound));
  return params;
}

GridFunction compose(const Hamiltonian1D& h, const Hamiltonian1D& g,
                     double t, double s, const GridFunction& u0,
                     const SolveParams& params) {
  return evolve(h, evolve(g, u0, s, params), t, params);
}

GridFunction flip_solve(const Hamiltonian1D& g, const GridFunction& u0,
                        double s, const SolveParams& params) {
  const Hamiltonian1D gbar = Hamiltonian1D::reflect(Hamiltonian1D::negate(g));
  const GridFunction evolved = evolve(gbar, GridFunction(-u0.values()), s, params);
  return GridFunction(-evolved.values());
}

MultiTimeReport commutation_defect(const Hamiltonian1D& h, const Hamiltonian1D& g,
                                   const GridFunction& u0,
                                   const std::vector<double>& t_grid,
                                   const std::vector<double>& s_grid,
                                   const SolveParams& params) {
  check_time_grid(t_grid, "t");
  check_time_grid(s_grid, "s");
  const auto nt = static_cast<Eigen::Index>(t_grid.size());
  const auto ns = static_cast<Eigen::Index>(s_grid.size());

  // Inner legs are shared between cells; outer legs restart from them so the
  // zero row and column cancel exactly.
  std::vector<GridFunction> g_first, h_first;
  g_first.reserve(s_grid.size());
  h_first.reserve(t_grid.size());
  for (double s : s_grid) g_first.push_back(evolve(g, u0, s, params));
  for (double t : t_grid) h_first.push_back(evolve(h, u0, t, params));

  MultiTimeReport report;
  report.t_grid = t_grid;
  report.s_grid = s_grid;
  report.defect.resize(nt, ns);
  report.defect_l1.resize(nt, ns);
  report.max_defect = 0.0;
  for (Eigen::Index i = 0; i < nt; ++i) {
    for (Eigen::Index j = 0; j < ns; ++j) {
      const GridFunction hg = evolve(h, g_first[j], t_grid[i], params);
      const GridFunction gh = evolve(g, h_first[i], s_grid[j], params);
      const Eigen::ArrayXd diff = hg.values() - gh.values();
      report.defect(i, j) = diff.abs().maxCoeff();
      report.defect_l1(i, j) = diff.abs().mean();
      if (report.defect(i, j) > report.max_defect) {
        report.max_defect = report.defect(i, j);
        report.argmax_t = static_cast<int>(i);
        report.argmax_s = static_cast<int>(j);
      }
    }
  }
  report.refinement.emplace_back(u0.size(), report.max_defect);
  return report;
}

MultiTimeReport commutation_defect_refined(const Hamiltonian1D& h,
                                           const Hamiltonian1D& g,
                                           const InitialData& u0, int n,
                                           const std::vector<double>& t_grid,
                                           const std::vector<double>& s_grid,
                                           double cfl) {
  if (!u0) throw std::invalid_argument("commutation_defect_refined: empty u0");
  const GridFunction coarse0 = u0(n);
  const GridFunction fine0 = u0(2 * n);
  MultiTimeReport coarse = commutation_defect(
      h, g, coarse0, t_grid, s_grid, make_pair_params(h, g, coarse0, cfl));
  MultiTimeReport fine = commutation_defect(
      h, g, fine0, t_grid, s_grid, make_pair_params(h, g, fine0, cfl));
  fine.refinement = {{n, coarse.max_defect}, {2 * n, fine.max_defect}};
  return fine;
}

MultiTimeVerdict multitime_verdict(const Hamiltonian1D& h, const Hamiltonian1D& g,
                                   const InitialData& u0,
                                   const VerdictOptions& opts) {
  if (!u0) throw std::invalid_argument("multitime_verdict: empty u0");
  if (h.convexity() != Convexity::tonelli_convex)
    throw std::invalid_argument("multitime_verdict: H must be Tonelli convex");
  if (Hamiltonian1D::negate(g).convexity() != Convexity::tonelli_convex)
    throw std::invalid_argument("multitime_verdict: -G must be Tonelli convex");

  const GridFunction coarse0 = u0(opts.n);
  const GridFunction fine0 = u0(2 * opts.n);
  const SolveParams coarse_params = make_pair_params(h, g, coarse0, opts.cfl);
  const SolveParams fine_params = make_pair_params(h, g, fine0, opts.cfl);

  // Commutation of the flows is necessary for a joint solution; refuse pairs
  // that fail it outright.
  const double bracket = poisson_bracket_sup(h, g, coarse_params.grad_bound);
  if (bracket > 1e-8)
    throw std::invalid_argument(
        "multitime_verdict: Poisson bracket does not vanish (sup = " +
        std::to_string(bracket) + ")");

  MultiTimeVerdict v;
  v.report = commutation_defect(h, g, fine0, opts.t_grid, opts.s_grid, fine_params);
  const MultiTimeReport coarse_report =
      commutation_defect(h, g, coarse0, opts.t_grid, opts.s_grid, coarse_params);
  v.defect_coarse = coarse_report.max_defect;
  v.defect_fine = v.report.max_defect;
  v.report.refinement = {{opts.n, v.defect_coarse}, {2 * opts.n, v.defect_fine}};
  v.ratio = v.defect_coarse == 0.0 ? 0.0 : v.defect_fine / v.defect_coarse;

  // Self-commutation of H at the fine grid calibrates the scheme error.
  v.baseline = commutation_defect(h, h, fine0, opts.t_grid, opts.s_grid,
                                  make_pair_params(h, h, fine0, opts.cfl))
                   .max_defect;

  const bool persistent = v.ratio > 0.5 && v.defect_fine > 10.0 * v.baseline;
  if (persistent) {
    v.kind = VerdictKind::nonexistence_evidence;
    return v;
  }

  // Candidate constants from the smoothed single-Hamiltonian drifts.
  v.c_h = estimate_constant(h, h, fine0, opts.t_grid, fine_params);
  v.c_g = estimate_constant(h, g, fine0, opts.s_grid, fine_params);

  // Surface check: S^t_H S^s_G u0 against u0 - t c_H - s c_G, with a
  // tolerance of 5x the single-run refinement error (floored near machine
  // precision for exactly-solvable cases).
  double single_run_error = 0.0;
  for (double t : opts.t_grid) {
    if (t == 0.0) continue;
    single_run_error =
        std::max(single_run_error,
                 sup_dist(downsample(evolve(h, fine0, t, fine_params), opts.n),
                          evolve(h, coarse0, t, coarse_params)));
  }
  for (double s : opts.s_grid) {
    if (s == 0.0) continue;
    single_run_error =
        std::max(single_run_error,
                 sup_dist(downsample(evolve(g, fine0, s, fine_params), opts.n),
                          evolve(g, coarse0, s, coarse_params)));
  }
  v.surface_tolerance = std::max(5.0 * single_run_error, 1e-12);

  std::vector<GridFunction> g_first;
  for (double s : opts.s_grid) g_first.push_back(evolve(g, fine0, s, fine_params));
  v.surface_error = 0.0;
  for (double t : opts.t_grid) {
    for (size_t j = 0; j < opts.s_grid.size(); ++j) {
      const GridFunction surf = evolve(h, g_first[j], t, fine_params);
      const Eigen::ArrayXd model =
          fine0.values() - t * v.c_h - opts.s_grid[j] * v.c_g;
      v.surface_error =
          std::max(v.surface_error, (surf.values() - model).abs().maxCoeff());
    }
  }

  v.kind = v.surface_error <= v.surface_tolerance
               ? VerdictKind::exists_evidence
               : VerdictKind::nonexistence_evidence;
  return v;
}

nlohmann::json MultiTimeReport::to_json() const {
  nlohmann::json j;
  j["t_grid"] = t_grid;
  j["s_grid"] = s_grid;
  std::vector<std::vector<double>> rows, rows_l1;
  for (Eigen::Index i = 0; i < defect.rows(); ++i) {
    rows.emplace_back(defect.row(i).begin(), defect.row(i).end());
    rows_l1.emplace_back(defect_l1.row(i).begin(), defect_l1.row(i).end());
  }
  j["defect"] = rows;
  j["defect_l1"] = rows_l1;
  j["max_defect"] = max_defect;
  j["argmax"] = {t_grid.empty() ? 0.0 : t_grid[argmax_t],
                 s_grid.empty() ? 0.0 : s_grid[argmax_s]};
  std::vector<std::vector<double>> ref;
  for (auto [n, d] : refinement) ref.push_back({static_cast<double>(n), d});
  j["refinement"] = ref;
  return j;
}

nlohmann::json MultiTimeVerdict::to_json() const {
  nlohmann::json j = report.to_json();
  j["verdict"] = kind == VerdictKind::exists_evidence ? "exists_evidence"
                                                      : "nonexistence_evidence";
  j["defect_coarse"] = defect_coarse;
  j["defect_fine"] = defect_fine;
  j["ratio"] = ratio;
  j["baseline"] = baseline;
  if (kind == VerdictKind::exists_evidence) {
    j["c_H"] = c_h;
    j["c_G"] = c_g;
    j["surface_error"] = surface_error;
    j["surface_tolerance"] = surface_tolerance;
  }
  return j;
}

}  // namespace hjlab

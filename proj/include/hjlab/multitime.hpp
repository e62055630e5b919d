#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "hjlab/solver.hpp"

namespace hjlab {

/// Produces the initial datum at a requested resolution, so refinement
/// studies can resample instead of interpolating.
using InitialData = std::function<GridFunction(int)>;

/// Shared run parameters for a pair of Hamiltonians: P is the max of the two
/// gradient bounds, theta the max of the two speed bounds at that P. Both
/// evolutions then march with the same dt, which keeps the two composition
/// orders exactly comparable.
SolveParams make_pair_params(const Hamiltonian1D& h, const Hamiltonian1D& g,
                             const GridFunction& u0, double cfl = 0.4);

/// S^t_H (S^s_G u0).
GridFunction compose(const Hamiltonian1D& h, const Hamiltonian1D& g,
                     double t, double s, const GridFunction& u0,
                     const SolveParams& params);

/// Solve the anti-coercive (concave) problem through the flip identity:
/// negate u0, evolve under Reflect(Negate(g)), negate the result.
GridFunction flip_solve(const Hamiltonian1D& g, const GridFunction& u0,
                        double s, const SolveParams& params);

struct MultiTimeReport {
  std::vector<double> t_grid;
  std::vector<double> s_grid;
  Eigen::MatrixXd defect;     // sup-norm, rows follow t_grid
  Eigen::MatrixXd defect_l1;  // mean-abs diagnostic, never used for verdicts
  double max_defect = 0.0;
  int argmax_t = 0;
  int argmax_s = 0;
  std::vector<std::pair<int, double>> refinement;  // (n, max_defect) history

  nlohmann::json to_json() const;
};

/// Sup-distance between the two composition orders over a grid of time pairs.
/// Both grids must start at 0; the zero row and column vanish identically.
MultiTimeReport commutation_defect(const Hamiltonian1D& h, const Hamiltonian1D& g,
                                   const GridFunction& u0,
                                   const std::vector<double>& t_grid,
                                   const std::vector<double>& s_grid,
                                   const SolveParams& params);

/// commutation_defect at n and 2n; returns the fine report with the
/// refinement history filled in.
MultiTimeReport commutation_defect_refined(const Hamiltonian1D& h,
                                           const Hamiltonian1D& g,
                                           const InitialData& u0, int n,
                                           const std::vector<double>& t_grid,
                                           const std::vector<double>& s_grid,
                                           double cfl = 0.4);

enum class VerdictKind { exists_evidence, nonexistence_evidence };

struct MultiTimeVerdict {
  VerdictKind kind = VerdictKind::nonexistence_evidence;
  MultiTimeReport report;       // finest level, refinement history included
  double defect_coarse = 0.0;   // max defect at n
  double defect_fine = 0.0;     // max defect at 2n
  double ratio = 0.0;           // fine / coarse (0 when coarse == 0)
  double baseline = 0.0;        // self-commutation defect of H at 2n
  double c_h = 0.0;             // only meaningful for exists_evidence
  double c_g = 0.0;
  double surface_error = std::numeric_limits<double>::infinity();
  double surface_tolerance = 0.0;

  nlohmann::json to_json() const;
};

struct VerdictOptions {
  int n = 512;
  double cfl = 0.4;
  std::vector<double> t_grid{0.0, 0.25, 0.5};
  std::vector<double> s_grid{0.0, 0.25, 0.5};
};

/// Decide between evidence for a joint solution surface u0 - t c_H - s c_G
/// and evidence of a persistent commutation obstruction. Requires H Tonelli
/// convex, G Tonelli concave, and a vanishing Poisson bracket.
MultiTimeVerdict multitime_verdict(const Hamiltonian1D& h, const Hamiltonian1D& g,
                                   const InitialData& u0,
                                   const VerdictOptions& opts = {});

}  // namespace hjlab

#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "hjlab/flow.hpp"
#include "hjlab/multitime.hpp"
#include "hjlab/solver.hpp"

namespace hjlab {

/// The explicit stationary solution for the pendulum: continuous, 2/pi-high
/// arch over [0,1] with a downward derivative jump at x = 1/2.
GridFunction pendulum_weak_kam(int n);

/// Its derivative sampled branchwise: 2 sin(pi x) on [0,1/2], -2 sin(pi x)
/// on (1/2,1); the node x = 1/2 takes the left branch value.
Eigen::ArrayXd pendulum_weak_kam_derivative(int n);

struct WeakKamReport {
  double c_estimate = 0.0;
  std::vector<std::pair<double, double>> history;  // (T, slope estimate)
  double residual = 0.0;
  bool converged = false;

  nlohmann::json to_json() const;
};

/// Large-time slope estimate of the critical value: difference of the
/// evolved datum across one unit of time, averaged over the grid, with
/// checkpoints at T/4, T/2, 3T/4, T. Requires H Tonelli convex and T >= 10.
WeakKamReport critical_value(const Hamiltonian1D& h, const GridFunction& u0,
                             double T, double cfl = 0.4);

struct RegularityReport {
  double semiconcavity_c = 0.0;  // max second difference
  double semiconvexity_c = 0.0;  // min second difference
  double lip = 0.0;
  double budget = 0.0;
  bool c11 = false;  // both extrema within the budget on this grid

  nlohmann::json to_json() const;
};

RegularityReport regularity(const GridFunction& u, double budget = 100.0);

/// A C^{1,1} certificate needs the budget to hold across a grid doubling.
bool c11_certified(const RegularityReport& coarse, const RegularityReport& fine);

struct TransverseResult {
  bool invariant = false;
  double alpha = 0.0;     // mean of H(x_j, v'(x_j))
  double residual = 0.0;  // max |H(x_j, v'(x_j)) - alpha|
  double max_hausdorff = 0.0;
  std::vector<bool> graph_per_time;

  nlohmann::json to_json() const;
};

/// Push the derivative graph through the Hamiltonian flow at each requested
/// time; invariant means every push stays a graph within Hausdorff tol.
TransverseResult transverse_check(const Hamiltonian1D& h,
                                  const Eigen::ArrayXd& derivative_samples,
                                  const std::vector<double>& times,
                                  double tol = 1e-2, double dt = 1e-3);

/// Same check with the derivative taken from nodal values of v: centered
/// differences away from kinks, one-sided at detected kink nodes.
TransverseResult transverse_check(const Hamiltonian1D& h, const GridFunction& v,
                                  const std::vector<double>& times,
                                  double tol = 1e-2, double dt = 1e-3);

/// Kink-aware discrete derivative used by the GridFunction overload.
Eigen::ArrayXd discrete_derivative(const GridFunction& v);

struct SurfaceFit {
  bool match = false;
  double c_h = 0.0;
  double c_g = 0.0;
  double sup_error = 0.0;
  double tolerance = 0.0;
  double alpha_h = 0.0;      // critical_value(H)
  double alpha_neg_g = 0.0;  // critical_value(Reflect(Negate(G)))

  nlohmann::json to_json() const;
};

/// Fit the composed surface to u0 - t c_H - s c_G and cross-check the
/// constants against the critical values of H and -G. Throws std::logic_error
/// when multitime_verdict reports nonexistence.
SurfaceFit theorem_main_surface(const Hamiltonian1D& h, const Hamiltonian1D& g,
                                const InitialData& u0,
                                const VerdictOptions& opts = {});

}  // namespace hjlab

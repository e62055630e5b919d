#pragma once

#include <vector>

#include <Eigen/Core>

#include "hjlab/grid_function.hpp"
#include "hjlab/hamiltonian.hpp"

namespace hjlab {

/// Parameters of one evolution run. grad_bound (P) and theta come from the
/// a-priori analysis of the Hamiltonian and the initial data; the time step
/// is cfl * dx / max(theta, 1) with cfl capped at 1/2 for monotonicity.
struct SolveParams {
  double cfl = 0.4;
  double grad_bound = 0.0;
  double theta = 0.0;
  std::vector<double> record_times;
};

/// A-priori bound on the discrete gradient of the evolved solution:
/// the smallest lattice radius R (step 0.05, cap 50) with
/// inf_x H(x,p) > M for every lattice |p| > R, where M is the sampled sup of
/// |H| over |p| <= Lip(u0); anti-coercive H is scanned as Reflect(Negate(H)).
/// Throws CoercivityError if the scan hits the cap or H is tagged non-coercive.
double grad_bound(const Hamiltonian1D& h, const GridFunction& u0);

/// grad_bound + speed_bound packaged for a run.
SolveParams make_params(const Hamiltonian1D& h, const GridFunction& u0,
                        double cfl = 0.4);

double time_step(const SolveParams& params, double dx);

/// One monotone local Lax-Friedrichs step:
/// u_j - dt * [ H(x_j, (D+ + D-)/2) - theta/2 * (D+ - D-) ].
GridFunction lf_step(const Hamiltonian1D& h, const GridFunction& u,
                     double theta, double dt);

/// March to time t with the CFL step; a shorter final step lands exactly on t.
GridFunction evolve(const Hamiltonian1D& h, const GridFunction& u0, double t,
                    const SolveParams& params);

/// Snapshots of one evolution at params.record_times (first entry must be 0).
struct TimeSlab {
  std::vector<double> times;
  Eigen::MatrixXd values;  // one column per time

  int grid_size() const { return static_cast<int>(values.rows()); }
  GridFunction slice(int k) const { return GridFunction(values.col(k).array()); }
};

TimeSlab evolve_record(const Hamiltonian1D& h, const GridFunction& u0,
                       const SolveParams& params);

/// Exact variational solution for H = p^2/2: pointwise min over grid nodes
/// (and their +-1 period shifts) of u0(y) + |x - y|^2 / (2t). Requires t > 0.
GridFunction hopf_lax(const GridFunction& u0, double t);

/// Discrete sup-convolution in time:
/// w(t_i, x_j) = max_k [ v(t_k, x_j) - |t_i - t_k| / delta ].
TimeSlab sup_convolution_time(const TimeSlab& v, double delta);

}  // namespace hjlab

#pragma once

#include <vector>

#include <Eigen/Core>

#include "hjlab/hamiltonian.hpp"

namespace hjlab {

/// One point of the Hamiltonian flow; x lives on the unit torus.
struct FlowState {
  double x = 0.0;
  double p = 0.0;
};

/// A finite cloud of flow points, typically the graph {(x_j, v'(x_j))}.
struct GraphCloud {
  Eigen::ArrayXd x;  // strictly increasing in [0,1) at construction
  Eigen::ArrayXd p;

  static GraphCloud over_nodes(const Eigen::ArrayXd& derivative_samples);
  Eigen::Index size() const { return x.size(); }
};

/// Result of pushing a cloud forward under the flow.
struct PushedCloud {
  GraphCloud cloud;          // x wrapped back to [0,1)
  Eigen::ArrayXd lifted_x;   // unwrapped positions, tracks winding
  bool is_graph = false;     // cyclic order of the lifted x survived
  double graph_distortion = 0.0;  // max overlap when the order folded, else 0
};

/// One classical RK4 step of x' = dH/dp, p' = -dH/dx.
FlowState flow_step(const Hamiltonian1D& h, FlowState s, double dt);

/// Integrate to time t with fixed step dt (a shorter final step lands on t).
FlowState integrate_flow(const Hamiltonian1D& h, FlowState s, double t, double dt);

/// Push every point of the cloud to time t and report whether the image is
/// still a graph over the torus (strict cyclic monotonicity of the lifted x;
/// coincident x counts as a fold).
PushedCloud push_graph(const Hamiltonian1D& h, const GraphCloud& cloud,
                       double t, double dt);

}  // namespace hjlab

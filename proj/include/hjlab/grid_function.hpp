#pragma once

#include <functional>

#include <Eigen/Core>

namespace hjlab {

/// Nodal values of a periodic function on x_j = j/n. The grid size is a
/// power of two between 64 and 8192, so every node is exact in binary and
/// coarse grids are subsets of fine ones.
class GridFunction {
 public:
  explicit GridFunction(Eigen::ArrayXd values);

  static GridFunction zeros(int n);
  static GridFunction constant(int n, double c);
  static GridFunction sawtooth(int n);  // distance to the nearest integer
  static GridFunction cosine(int n);    // cos(2 pi x)
  static GridFunction sample(int n, const std::function<double(double)>& f);

  int size() const { return static_cast<int>(v_.size()); }
  double dx() const { return 1.0 / size(); }
  double node(int j) const { return static_cast<double>(j) / size(); }
  double operator[](int j) const { return v_[j]; }
  const Eigen::ArrayXd& values() const { return v_; }

 private:
  Eigen::ArrayXd v_;
};

double sup_norm(const GridFunction& u);
double sup_dist(const GridFunction& u, const GridFunction& w);

/// Max of |u_{j+1} - u_j| / dx over the periodic grid.
double lipschitz_constant(const GridFunction& u);

/// Centered second differences (u_{j+1} - 2 u_j + u_{j-1}) / dx^2.
Eigen::ArrayXd second_differences(const GridFunction& u);

/// Restrict to a coarser dyadic grid (m must divide size()).
GridFunction downsample(const GridFunction& u, int m);

}  // namespace hjlab

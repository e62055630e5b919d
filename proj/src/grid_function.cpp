#include "hjlab/grid_function.hpp"

#include <cmath>
#include <stdexcept>

#include "hjlab/hamiltonian.hpp"  // two_pi

namespace hjlab {

namespace {

bool admissible_size(Eigen::Index n) {
  return n >= 64 && n <= 8192 && (n & (n - 1)) == 0;
}

}  // namespace

GridFunction::GridFunction(Eigen::ArrayXd values) : v_(std::move(values)) {
  if (!admissible_size(v_.size()))
    throw std::invalid_argument(
        "GridFunction: size must be a power of two in [64, 8192]");
  if (!v_.isFinite().all())
    throw std::domain_error("GridFunction: non-finite value");
}

GridFunction GridFunction::zeros(int n) {
  return GridFunction(Eigen::ArrayXd::Zero(n));
}

GridFunction GridFunction::constant(int n, double c) {
  return GridFunction(Eigen::ArrayXd::Constant(n, c));
}

GridFunction GridFunction::sawtooth(int n) {
  return sample(n, [](double x) { return std::min(x, 1.0 - x); });
}

GridFunction GridFunction::cosine(int n) {
  return sample(n, [](double x) { return std::cos(two_pi * x); });
}

GridFunction GridFunction::sample(int n, const std::function<double(double)>& f) {
  if (!f) throw std::invalid_argument("GridFunction::sample: empty function");
  if (!admissible_size(n))
    throw std::invalid_argument(
        "GridFunction: size must be a power of two in [64, 8192]");
  Eigen::ArrayXd v(n);
  for (int j = 0; j < n; ++j) v[j] = f(static_cast<double>(j) / n);
  return GridFunction(std::move(v));
}

double sup_norm(const GridFunction& u) { return u.values().abs().maxCoeff(); }

double sup_dist(const GridFunction& u, const GridFunction& w) {
  if (u.size() != w.size())
    throw std::invalid_argument("sup_dist: size mismatch");
  return (u.values() - w.values()).abs().maxCoeff();
}

double lipschitz_constant(const GridFunction& u) {
  const int n = u.size();
  double sup = 0.0;
  for (int j = 0; j < n; ++j)
    sup = std::max(sup, std::abs(u[(j + 1) % n] - u[j]));
  return sup * n;
}

Eigen::ArrayXd second_differences(const GridFunction& u) {
  const int n = u.size();
  const double inv_dx2 = static_cast<double>(n) * n;
  Eigen::ArrayXd s(n);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const int jm = (j + n - 1) % n;
    s[j] = (u[jp] - 2.0 * u[j] + u[jm]) * inv_dx2;
  }
  return s;
}

GridFunction downsample(const GridFunction& u, int m) {
  const int n = u.size();
  if (m <= 0 || n % m != 0)
    throw std::invalid_argument("downsample: target size must divide the grid");
  const int stride = n / m;
  Eigen::ArrayXd v(m);
  for (int j = 0; j < m; ++j) v[j] = u[j * stride];
  return GridFunction(std::move(v));
}

}  // namespace hjlab

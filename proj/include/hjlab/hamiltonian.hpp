#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace hjlab {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Both partial derivatives of H at one point.
struct Partials {
  double dx = 0.0;  // dH/dx
  double dp = 0.0;  // dH/dp
};

enum class Convexity { tonelli_convex, tonelli_concave, general };
enum class Coercivity { coercive, anti_coercive, none };

/// Thrown when a computation requires coercivity the Hamiltonian does not
/// have (wrong tag, or an a-priori gradient scan that never closes).
class CoercivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Hamiltonian H(x,p) on the unit torus in x. Immutable value type;
/// copies share the underlying node tree. Convexity/coercivity tags are
/// derived structurally at construction and kept consistent under the
/// Negate/Reflect wrappers.
class Hamiltonian1D {
 public:
  Hamiltonian1D() = default;

  double eval(double x, double p) const;
  double operator()(double x, double p) const { return eval(x, p); }
  Partials partials(double x, double p) const;

  Convexity convexity() const;
  Coercivity coercivity() const;
  const std::string& name() const;
  bool valid() const { return impl_ != nullptr; }

  // Catalog.
  static Hamiltonian1D pendulum();      // p^2/2 + cos(2 pi x)
  static Hamiltonian1D kinetic();       // p^2/2
  static Hamiltonian1D mechanical(std::function<double(double)> potential,
                                  std::function<double(double)> potential_deriv,
                                  std::string label = "mechanical");
  static Hamiltonian1D tabulated(Eigen::ArrayXd potential_values);
  static Hamiltonian1D negate(Hamiltonian1D inner);   // -H(x,p)
  static Hamiltonian1D reflect(Hamiltonian1D inner);  // H(x,-p)

  /// Parse a JSON descriptor, e.g. {"kind":"negate","inner":{"kind":"pendulum"}}.
  /// Throws std::invalid_argument on unknown kinds or malformed structure.
  static Hamiltonian1D from_json(const nlohmann::json& spec);

  struct Impl;

 private:
  explicit Hamiltonian1D(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Conservative bound on |dH/dp| over x in [0,1), |p| <= grad_bound, by dense
/// sampling (256 x-nodes, a symmetric +-p lattice) inflated by 1.1.
double speed_bound(const Hamiltonian1D& h, double grad_bound);

/// sup |{H,G}| = sup |H_p G_x - G_p H_x| over the lattice x_i = i/nx,
/// p_k equally spaced on [-grad_bound, grad_bound]. Requires nx, np >= 64.
double poisson_bracket_sup(const Hamiltonian1D& h, const Hamiltonian1D& g,
                           double grad_bound, int nx = 256, int np = 256);

}  // namespace hjlab

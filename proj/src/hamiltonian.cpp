#include "hjlab/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace hjlab {

struct Hamiltonian1D::Impl {
  enum class Kind { pendulum, kinetic, mechanical, tabulated, negate, reflect };

  Kind kind;
  std::function<double(double)> potential;        // mechanical
  std::function<double(double)> potential_deriv;  // mechanical
  Eigen::ArrayXd table;                           // tabulated: V at nodes k/m
  Eigen::ArrayXd table_deriv;                     // centered differences of table
  std::shared_ptr<const Impl> inner;              // negate, reflect
  Convexity convexity;
  Coercivity coercivity;
  std::string name;
};

namespace {

using Impl = Hamiltonian1D::Impl;
using Kind = Impl::Kind;

// Periodic Catmull-Rom interpolation of nodal values f_k at x = k/m.
// At a node the value is f_k exactly and the derivative is the centered
// difference (f_{k+1} - f_{k-1}) * m / 2.
double periodic_cubic(const Eigen::ArrayXd& f, double x) {
  const int m = static_cast<int>(f.size());
  double y = (x - std::floor(x)) * m;
  int j = static_cast<int>(y);
  if (j >= m) j = m - 1;  // guards x just below an integer rounding up
  const double t = y - j;
  const double fm1 = f[(j + m - 1) % m];
  const double f0 = f[j];
  const double f1 = f[(j + 1) % m];
  const double f2 = f[(j + 2) % m];
  const double a1 = 0.5 * (f1 - fm1);
  const double a2 = fm1 - 2.5 * f0 + 2.0 * f1 - 0.5 * f2;
  const double a3 = 0.5 * (f2 - fm1) + 1.5 * (f0 - f1);
  return ((a3 * t + a2) * t + a1) * t + f0;
}

double eval_node(const Impl& h, double x, double p) {
  switch (h.kind) {
    case Kind::pendulum:
      return 0.5 * p * p + std::cos(two_pi * x);
    case Kind::kinetic:
      return 0.5 * p * p;
    case Kind::mechanical:
      return 0.5 * p * p + h.potential(x);
    case Kind::tabulated:
      return periodic_cubic(h.table, x);
    case Kind::negate:
      return -eval_node(*h.inner, x, p);
    case Kind::reflect:
      return eval_node(*h.inner, x, -p);
  }
  return 0.0;  // unreachable
}

Partials partials_node(const Impl& h, double x, double p) {
  switch (h.kind) {
    case Kind::pendulum:
      return {-two_pi * std::sin(two_pi * x), p};
    case Kind::kinetic:
      return {0.0, p};
    case Kind::mechanical:
      return {h.potential_deriv(x), p};
    case Kind::tabulated:
      return {periodic_cubic(h.table_deriv, x), 0.0};
    case Kind::negate: {
      Partials d = partials_node(*h.inner, x, p);
      return {-d.dx, -d.dp};
    }
    case Kind::reflect: {
      Partials d = partials_node(*h.inner, x, -p);
      return {d.dx, -d.dp};
    }
  }
  return {};
}

void require_finite_point(double x, double p) {
  if (!std::isfinite(x) || !std::isfinite(p))
    throw std::domain_error("Hamiltonian1D: non-finite evaluation point");
}

const Impl& deref(const std::shared_ptr<const Impl>& impl) {
  if (!impl) throw std::invalid_argument("Hamiltonian1D: empty handle");
  return *impl;
}

}  // namespace

double Hamiltonian1D::eval(double x, double p) const {
  require_finite_point(x, p);
  return eval_node(deref(impl_), x, p);
}

Partials Hamiltonian1D::partials(double x, double p) const {
  require_finite_point(x, p);
  return partials_node(deref(impl_), x, p);
}

Convexity Hamiltonian1D::convexity() const { return deref(impl_).convexity; }
Coercivity Hamiltonian1D::coercivity() const { return deref(impl_).coercivity; }
const std::string& Hamiltonian1D::name() const { return deref(impl_).name; }

Hamiltonian1D Hamiltonian1D::pendulum() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::pendulum;
  impl->convexity = Convexity::tonelli_convex;
  impl->coercivity = Coercivity::coercive;
  impl->name = "pendulum";
  return Hamiltonian1D(std::move(impl));
}

Hamiltonian1D Hamiltonian1D::kinetic() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::kinetic;
  impl->convexity = Convexity::tonelli_convex;
  impl->coercivity = Coercivity::coercive;
  impl->name = "kinetic";
  return Hamiltonian1D(std::move(impl));
}

Hamiltonian1D Hamiltonian1D::mechanical(std::function<double(double)> potential,
                                        std::function<double(double)> potential_deriv,
                                        std::string label) {
  if (!potential || !potential_deriv)
    throw std::invalid_argument("mechanical: potential and derivative required");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::mechanical;
  impl->potential = std::move(potential);
  impl->potential_deriv = std::move(potential_deriv);
  impl->convexity = Convexity::tonelli_convex;
  impl->coercivity = Coercivity::coercive;
  impl->name = std::move(label);
  return Hamiltonian1D(std::move(impl));
}

Hamiltonian1D Hamiltonian1D::tabulated(Eigen::ArrayXd potential_values) {
  const auto m = potential_values.size();
  if (m < 4) throw std::invalid_argument("tabulated: need at least 4 samples");
  if (!potential_values.isFinite().all())
    throw std::invalid_argument("tabulated: non-finite sample");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::tabulated;
  impl->table = std::move(potential_values);
  impl->table_deriv.resize(m);
  const double inv_2h = 0.5 * static_cast<double>(m);
  for (Eigen::Index k = 0; k < m; ++k)
    impl->table_deriv[k] = (impl->table[(k + 1) % m] - impl->table[(k + m - 1) % m]) * inv_2h;
  // No kinetic term: H(x,p) = V(x). Neither convex nor coercive in p.
  impl->convexity = Convexity::general;
  impl->coercivity = Coercivity::none;
  impl->name = "tabulated";
  return Hamiltonian1D(std::move(impl));
}

Hamiltonian1D Hamiltonian1D::negate(Hamiltonian1D h) {
  const Impl& in = deref(h.impl_);
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::negate;
  impl->inner = h.impl_;
  switch (in.convexity) {
    case Convexity::tonelli_convex: impl->convexity = Convexity::tonelli_concave; break;
    case Convexity::tonelli_concave: impl->convexity = Convexity::tonelli_convex; break;
    case Convexity::general: impl->convexity = Convexity::general; break;
  }
  switch (in.coercivity) {
    case Coercivity::coercive: impl->coercivity = Coercivity::anti_coercive; break;
    case Coercivity::anti_coercive: impl->coercivity = Coercivity::coercive; break;
    case Coercivity::none: impl->coercivity = Coercivity::none; break;
  }
  impl->name = "negate(" + in.name + ")";
  return Hamiltonian1D(std::move(impl));
}

Hamiltonian1D Hamiltonian1D::reflect(Hamiltonian1D h) {
  const Impl& in = deref(h.impl_);
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::reflect;
  impl->inner = h.impl_;
  // p -> -p preserves convexity type and the direction of coercivity.
  impl->convexity = in.convexity;
  impl->coercivity = in.coercivity;
  impl->name = "reflect(" + in.name + ")";
  return Hamiltonian1D(std::move(impl));
}

Hamiltonian1D Hamiltonian1D::from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
    throw std::invalid_argument("hamiltonian descriptor: expected {\"kind\": ...}");
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "pendulum") return pendulum();
  if (kind == "kinetic") return kinetic();
  if (kind == "negate" || kind == "reflect") {
    if (!spec.contains("inner"))
      throw std::invalid_argument("hamiltonian descriptor: '" + kind + "' needs \"inner\"");
    Hamiltonian1D in = from_json(spec["inner"]);
    return kind == "negate" ? negate(std::move(in)) : reflect(std::move(in));
  }
  if (kind == "tabulated") {
    if (!spec.contains("values") || !spec["values"].is_array())
      throw std::invalid_argument("hamiltonian descriptor: 'tabulated' needs \"values\" array");
    const auto& vals = spec["values"];
    Eigen::ArrayXd table(vals.size());
    for (size_t k = 0; k < vals.size(); ++k) {
      if (!vals[k].is_number())
        throw std::invalid_argument("hamiltonian descriptor: non-numeric table entry");
      table[static_cast<Eigen::Index>(k)] = vals[k].get<double>();
    }
    return tabulated(std::move(table));
  }
  throw std::invalid_argument("hamiltonian descriptor: unknown kind '" + kind + "'");
}

double speed_bound(const Hamiltonian1D& h, double grad_bound) {
  if (!(grad_bound >= 0.0) || !std::isfinite(grad_bound))
    throw std::invalid_argument("speed_bound: grad_bound must be finite and >= 0");
  const int nx = 256;
  const int np = 128;  // lattice 0..P plus mirror, 257 p-values per x
  double sup = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / nx;
    for (int k = 0; k <= np; ++k) {
      // Exactly symmetric +-p pairs so the bound is invariant under p -> -p.
      const double p = grad_bound * k / np;
      sup = std::max(sup, std::abs(h.partials(x, p).dp));
      sup = std::max(sup, std::abs(h.partials(x, -p).dp));
    }
  }
  return 1.1 * sup;
}

double poisson_bracket_sup(const Hamiltonian1D& h, const Hamiltonian1D& g,
                           double grad_bound, int nx, int np) {
  if (nx < 64 || np < 64)
    throw std::invalid_argument("poisson_bracket_sup: need nx, np >= 64");
  if (!(grad_bound >= 0.0) || !std::isfinite(grad_bound))
    throw std::invalid_argument("poisson_bracket_sup: bad grad_bound");
  double sup = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / nx;
    for (int k = 0; k < np; ++k) {
      const double p = np == 1 ? 0.0
                               : -grad_bound + 2.0 * grad_bound * k / (np - 1);
      const Partials dh = h.partials(x, p);
      const Partials dg = g.partials(x, p);
      sup = std::max(sup, std::abs(dh.dp * dg.dx - dg.dp * dh.dx));
    }
  }
  return sup;
}

}  // namespace hjlab

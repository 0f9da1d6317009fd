#include "fraclab/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fraclab {

ElementQuadrature element_quadrature(const Mesh& mesh, int element) {
  const Element& el = mesh.elements[element];
  ElementQuadrature q;
  if (el.size() == 2) {
    const double x0 = mesh.nodes[el.v[0]].x, x1 = mesh.nodes[el.v[1]].x;
    const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
    const double g = 1.0 / std::sqrt(3.0);
    q.points = {{mid - g * half, 0.0}, {mid + g * half, 0.0}};
    q.weights = {std::abs(half), std::abs(half)};
  } else {
    const Point &a = mesh.nodes[el.v[0]], &b = mesh.nodes[el.v[1]], &c = mesh.nodes[el.v[2]];
    const double w = mesh.element_measure(element) / 3.0;
    q.points = {{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)},
                {0.5 * (b.x + c.x), 0.5 * (b.y + c.y)},
                {0.5 * (a.x + c.x), 0.5 * (a.y + c.y)}};
    q.weights = {w, w, w};
  }
  return q;
}

double lp_norm(const GridFunction& u, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  const Mesh& mesh = u.mesh();
  if (std::isinf(p)) return u.max_abs();
  const double scale = u.max_abs();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    ElementQuadrature q = element_quadrature(mesh, e);
    for (size_t g = 0; g < q.points.size(); ++g) {
      double v = std::abs(u.eval_on_element(e, q.points[g])) / scale;
      acc += q.weights[g] * std::pow(v, p);
    }
  }
  return scale * std::pow(acc, 1.0 / p);
}

double weighted_sup_norm(const GridFunction& u) {
  if (!u.vanishes_on_boundary())
    throw std::invalid_argument("weighted_sup_norm: nonzero boundary values (not a C0_delta candidate)");
  const Mesh& mesh = u.mesh();
  const double s = mesh.domain.order();
  double best = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (!mesh.is_interior[i]) continue;
    double d = boundary_distance(mesh.domain, mesh.nodes[i]);
    best = std::max(best, std::abs(u[i]) / std::pow(d, s));
  }
  return best;
}

double weighted_holder_norm(const GridFunction& u, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("weighted_holder_norm: alpha must lie in (0,1)");
  if (!u.vanishes_on_boundary())
    throw std::invalid_argument("weighted_holder_norm: nonzero boundary values");
  const Mesh& mesh = u.mesh();
  const double s = mesh.domain.order();
  std::vector<double> quot;
  std::vector<Point> pts;
  quot.reserve(mesh.num_interior());
  double sup = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (!mesh.is_interior[i]) continue;
    double d = boundary_distance(mesh.domain, mesh.nodes[i]);
    double v = u[i] / std::pow(d, s);
    quot.push_back(v);
    pts.push_back(mesh.nodes[i]);
    sup = std::max(sup, std::abs(v));
  }
  double semi = 0.0;
  for (size_t i = 0; i < quot.size(); ++i)
    for (size_t j = i + 1; j < quot.size(); ++j) {
      double r = distance(pts[i], pts[j]);
      semi = std::max(semi, std::abs(quot[i] - quot[j]) / std::pow(r, alpha));
    }
  return sup + semi;
}

double default_holder_exponent(double s) { return 0.5 * std::min(s, 1.0 - s); }

}  // namespace fraclab

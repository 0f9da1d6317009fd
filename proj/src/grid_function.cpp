#include "fraclab/grid_function.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

double truncate(double t, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("truncate: level k must be positive");
  double m = std::min(std::abs(t), k);
  return t < 0.0 ? -m : m;
}

GridFunction::GridFunction(std::shared_ptr<const Mesh> mesh)
    : mesh_(std::move(mesh)), values_(Eigen::VectorXd::Zero(mesh_->num_nodes())) {}

GridFunction::GridFunction(std::shared_ptr<const Mesh> mesh, Eigen::VectorXd nodal_values)
    : mesh_(std::move(mesh)), values_(std::move(nodal_values)) {
  if (values_.size() != mesh_->num_nodes())
    throw std::invalid_argument("GridFunction: value count does not match mesh node count");
}

bool GridFunction::vanishes_on_boundary(double tol) const {
  double scale = 1.0 + max_abs();
  for (int i = 0; i < size(); ++i)
    if (!mesh_->is_interior[i] && std::abs(values_[i]) > tol * scale) return false;
  return true;
}

Eigen::VectorXd GridFunction::interior() const {
  Eigen::VectorXd v(mesh_->num_interior());
  for (int k = 0; k < mesh_->num_interior(); ++k) v[k] = values_[mesh_->interior_nodes[k]];
  return v;
}

GridFunction GridFunction::from_interior(std::shared_ptr<const Mesh> mesh,
                                         const Eigen::VectorXd& interior_values) {
  if (interior_values.size() != mesh->num_interior())
    throw std::invalid_argument("GridFunction::from_interior: size mismatch");
  GridFunction u(mesh);
  for (int k = 0; k < mesh->num_interior(); ++k)
    u.values()[mesh->interior_nodes[k]] = interior_values[k];
  return u;
}

double GridFunction::eval_on_element(int element, const Point& p) const {
  const Element& el = mesh_->elements[element];
  if (el.size() == 2) {
    const double x0 = mesh_->nodes[el.v[0]].x, x1 = mesh_->nodes[el.v[1]].x;
    const double t = (p.x - x0) / (x1 - x0);
    return (1.0 - t) * values_[el.v[0]] + t * values_[el.v[1]];
  }
  const Point &a = mesh_->nodes[el.v[0]], &b = mesh_->nodes[el.v[1]], &c = mesh_->nodes[el.v[2]];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  return (1.0 - l1 - l2) * values_[el.v[0]] + l1 * values_[el.v[1]] + l2 * values_[el.v[2]];
}

double GridFunction::eval(const Point& p) const {
  int e = mesh_->locate(p);
  if (e < 0) return 0.0;
  return eval_on_element(e, p);
}

std::pair<GridFunction, GridFunction> pos_neg_parts(const GridFunction& u) {
  GridFunction plus(u.mesh_ptr()), minus(u.mesh_ptr());
  plus.values() = u.values().cwiseMax(0.0);
  minus.values() = (-u.values()).cwiseMax(0.0);
  return {std::move(plus), std::move(minus)};
}

}  // namespace fraclab

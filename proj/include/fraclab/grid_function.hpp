#pragma once

#include <Eigen/Core>
#include <memory>
#include <utility>

#include "fraclab/mesh.hpp"

namespace fraclab {

/// Scalar truncation sgn(t) * min(|t|, k). Odd in t, identity for |t| <= k.
double truncate(double t, double k);

/// Piecewise-linear nodal function on a mesh, extended by zero outside the
/// domain. Boundary values must vanish whenever the function represents an
/// element of the zero-exterior-trace energy space; `vanishes_on_boundary`
/// reports that flag.
class GridFunction {
public:
  explicit GridFunction(std::shared_ptr<const Mesh> mesh);
  GridFunction(std::shared_ptr<const Mesh> mesh, Eigen::VectorXd nodal_values);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  double operator[](int node) const { return values_[node]; }
  double& operator[](int node) { return values_[node]; }
  int size() const { return static_cast<int>(values_.size()); }

  bool vanishes_on_boundary(double tol = 1e-12) const;

  /// Interior nodal values in compact interior ordering.
  Eigen::VectorXd interior() const;
  /// Builds a grid function from interior values, zero on the boundary.
  static GridFunction from_interior(std::shared_ptr<const Mesh> mesh,
                                    const Eigen::VectorXd& interior_values);

  /// Pointwise evaluation (piecewise linear; zero outside the domain).
  double eval(const Point& p) const;
  /// Evaluation inside a known element, by barycentric interpolation.
  double eval_on_element(int element, const Point& p) const;

  double max_abs() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

private:
  std::shared_ptr<const Mesh> mesh_;
  Eigen::VectorXd values_;
};

/// Nodal positive and negative parts; u = plus - minus exactly at nodes.
std::pair<GridFunction, GridFunction> pos_neg_parts(const GridFunction& u);

}  // namespace fraclab

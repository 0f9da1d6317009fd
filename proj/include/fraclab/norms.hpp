#pragma once

#include <vector>

#include "fraclab/grid_function.hpp"

namespace fraclab {

/// Per-element quadrature points and weights for the composite element rule
/// (two-point Gauss on segments, edge-midpoint rule on triangles).
struct ElementQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
};
ElementQuadrature element_quadrature(const Mesh& mesh, int element);

/// Quadrature approximation of (integral |u|^p)^{1/p}; p = infinity returns
/// the max nodal absolute value. Stable for large p (scaled evaluation).
double lp_norm(const GridFunction& u, double p);

/// Weighted sup norm sup |u| / delta^s over interior nodes. Requires zero
/// boundary values.
double weighted_sup_norm(const GridFunction& u);

/// Weighted Hoelder norm: weighted sup norm plus the discrete alpha-Hoelder
/// seminorm of u/delta^s over interior node pairs.
double weighted_holder_norm(const GridFunction& u, double alpha);

/// Default Hoelder exponent used by the labs: min(s, 1-s)/2.
double default_holder_exponent(double s);

}  // namespace fraclab

#pragma once

#include <functional>
#include <limits>

#include "fraclab/grid_function.hpp"
#include "fraclab/kernel.hpp"

namespace fraclab {

struct FlapResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Principal-value evaluation of the normalized nonlocal operator at x for a
/// callable defined on all of R^N (N = 1 or 2). The ball around x is handled
/// by second-order Taylor compensation, the exterior by adaptive quadrature
/// with an algebraic substitution for the far field. Throws if the requested
/// tolerance cannot be certified.
FlapResult pointwise_flap(const std::function<double(const Point&)>& u, const Point& x,
                          const KernelSpec& kernel, double tol = 1e-7);

/// Nonlocal tail r^{2s} * integral over the complement of B_r(x0) of
/// |u| / |x-x0|^{N+2s}. The grid-function overload integrates over the mesh
/// support only (the extension vanishes); the callable overload assumes |u|
/// bounded with the far field handled by substitution.
double tail(const GridFunction& u, const Point& x0, double r, const KernelSpec& kernel);
double tail(const std::function<double(const Point&)>& u, const Point& x0, double r,
            const KernelSpec& kernel,
            double far_radius = std::numeric_limits<double>::infinity());

}  // namespace fraclab

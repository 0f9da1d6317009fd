#pragma once

#include <cmath>
#include <stdexcept>

namespace fraclab {

/// Singular kernel |x-y|^{-(N+2s)} with a multiplicative operator
/// normalization. `standard` uses the constant that makes the integral
/// operator match the classical fractional Laplacian, under which the
/// closed forms exercised by the test suite hold with their textbook
/// constants (torsion function (1-|x|^2)^s / kappa, bubble identities).
struct KernelSpec {
  int dimension = 1;
  double s = 0.5;
  double normalization = 1.0;

  static double standard_constant(int dimension, double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("KernelSpec: s must lie in (0,1)");
    if (dimension < 1) throw std::invalid_argument("KernelSpec: dimension must be >= 1");
    const double n = dimension;
    return std::pow(2.0, 2.0 * s) * s * std::tgamma(0.5 * n + s) /
           (std::pow(M_PI, 0.5 * n) * std::tgamma(1.0 - s));
  }

  static KernelSpec standard(int dimension, double s) {
    return KernelSpec{dimension, s, standard_constant(dimension, s)};
  }
};

}  // namespace fraclab

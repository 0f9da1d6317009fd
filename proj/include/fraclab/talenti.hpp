#pragma once

#include <vector>

#include "fraclab/flap.hpp"

namespace fraclab {

/// Bubble T_{eps,z}(x) = (eps / (eps^2 + |x-z|^2))^{(N-2s)/2}.
double talenti_eval(double eps, const Point& z, int dimension, double s, const Point& x);

/// Critical norm of the bubble over all of R^N (radial quadrature); a scale
/// invariant of the family.
double talenti_critical_norm(double eps, int dimension, double s);

/// Critical norm of the bubble truncated to the domain.
double talenti_critical_norm_on(const Domain& domain, double eps, const Point& z);

struct GammaFitReport {
  double gamma = 0.0;                // fitted multiplicative constant
  std::vector<Point> probes;
  std::vector<double> ratios;        // flap(T)(x) / T(x)^{(N+2s)/(N-2s)}
  double relative_spread = 0.0;      // (max-min)/mid over the probes
  bool constant_within_tol = false;
};

/// Fits the constant in flap(T) = Gamma * T^{(N+2s)/(N-2s)} from pointwise
/// operator evaluations at several probe points; constancy of the ratio is
/// the certified property. Throws when the spread exceeds the tolerance.
GammaFitReport talenti_fit_gamma(double eps, const Point& z, int dimension, double s,
                                 double tol = 0.01);

struct BlowupRow {
  double eps = 0.0;
  double sup_norm = 0.0;        // eps^{-(N-2s)/2}
  double crit_norm_omega = 0.0; // critical norm of the truncation to Omega
  double ratio = 0.0;           // sup / crit
};

/// Table over a decreasing eps sequence demonstrating sup-norm blowup at
/// bounded critical norm.
std::vector<BlowupRow> critical_blowup_demo(const Domain& domain, double s,
                                            const std::vector<double>& eps_sequence,
                                            const Point& z);

}  // namespace fraclab

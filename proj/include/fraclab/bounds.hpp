#pragma once

#include <vector>

#include "fraclab/grid_function.hpp"

namespace fraclab {

/// LHS - RHS of the elementary truncation inequality
///   (a-b)(a|a|_k^{r-2} - b|b|_k^{r-2}) >= 4(r-1)/r^2 (a|a|_k^{r/2-1} - b|b|_k^{r/2-1})^2
/// with |t|_k = min(|t|, k). Nonnegative for all a, b, r >= 2, k > 0;
/// identically zero at r = 2.
double elementary_inequality_gap(double a, double b, double r, double k);

/// Exponent ladder r_{n+1} = gamma^2 r_n + 2 - q with gamma^2 = 2*_s / 2.
/// The only fixed point is mu0 = (q-2)/(gamma^2-1); the ladder escapes to
/// infinity exactly when the start exceeds mu0.
struct MoserLadder {
  double gamma = 0.0;
  double gamma_sq = 0.0;
  double mu0 = 0.0;
  double start_mu = 0.0;
  std::vector<double> exponents;
  bool diverges = false;
};

MoserLadder moser_ladder(double q, int dimension, double s, double mu, int n_max);

/// Canonical starts from the bootstrap: subcritical 2*_s + 2 - q, critical
/// q(q+1)/2 + 2 - q.
double moser_subcritical_start(double q, int dimension, double s);
double moser_critical_start(double q);

/// Smallest nodal threshold K0 >= 0 with
/// (integral over {|u| > K0} of |u|^q)^{1-2/q} <= sigma.
double tail_smallness_level(const GridFunction& u, double q, double sigma);

/// Instance-wise evaluation of the L^{gamma^n} norm cascade: the measured
/// rung norms, the smallest H >= 1 validating the recursion
/// ||u/H||_{gamma^{n+1}} <= ||u/H||_{gamma^n}^{1 - gamma^{1-n}}, and the
/// resulting bound H * max_n ||u/H||_{gamma^n}, which must dominate the
/// discrete sup norm.
struct CascadeReport {
  std::vector<double> exponents;
  std::vector<double> norms;
  double h_scale = 1.0;
  double bound = 0.0;
  double sup_norm = 0.0;
  bool dominates = false;
};

CascadeReport sup_bound_cascade(const GridFunction& u, double q, int dimension, double s);

}  // namespace fraclab

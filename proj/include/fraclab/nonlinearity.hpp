#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "fraclab/geometry.hpp"
#include "fraclab/grid_function.hpp"

namespace fraclab {

/// Caratheodory nonlinearity f(x,t) with primitive F(x,t) = int_0^t f,
/// growth metadata |f(x,t)| <= a (1 + |t|^{q-1}) and structural flags.
struct Nonlinearity {
  std::string name = "custom";
  std::function<double(const Point&, double)> f;
  std::function<double(const Point&, double)> F;
  std::function<double(const Point&, double)> df_dt;  // optional; FD fallback if empty
  double growth_a = 1.0;
  double growth_q = 2.0;
  bool monotone = false;         // t -> f(x,t) nondecreasing
  bool sign_tf_nonneg = false;   // f(x,t) t >= 0
  bool autonomous = true;

  double dfdt(const Point& x, double t) const;
};

// Named constructors used by tests and the experiment configs.
Nonlinearity nl_zero();
Nonlinearity nl_constant(double c);
Nonlinearity nl_linear(double lambda);
Nonlinearity nl_linear_plus_constant(double lambda, double c);
Nonlinearity nl_power(double b, double r);  // f(t) = b |t|^{r-2} t
Nonlinearity nl_arctan_plus();              // f(t) = arctan(t) + 1
Nonlinearity nl_cubic(double b = 1.0);
Nonlinearity nl_cubic_soft(double lambda, double b);  // f(t) = lambda t - b t^3
Nonlinearity nl_exponential();              // violates every polynomial growth bound

struct GrowthReport {
  bool pass = false;
  double max_violation = 0.0;  // max of |f| - a(1+|t|^{q-1}) over samples
  Point witness_x{};
  double witness_t = 0.0;
  bool critical = false;       // q == 2*_s
  bool subcritical = false;    // q < 2*_s
  double primitive_mismatch = 0.0;  // max |F(x,t) - quadrature of f| over samples
};

/// Fuzz check of the growth bound over Omega x [-T, T] with T ranging over
/// several decades; also verifies F against numeric integration of f.
GrowthReport growth_check(const Nonlinearity& nl, const Domain& domain, int sample_count,
                          unsigned seed);

/// f_k(x,t) = f(x, t_k): bounded truncation at level k (effective growth
/// exponent 1), with the primitive accumulated consistently.
Nonlinearity truncate_nonlinearity_level(const Nonlinearity& nl, double k);

/// Order interval given by a certified sub/supersolution pair.
struct OrderedPair {
  std::shared_ptr<const GridFunction> lower;
  std::shared_ptr<const GridFunction> upper;

  OrderedPair(GridFunction lo, GridFunction up);
};

/// Three-branch truncation clamping t into [lower(x), upper(x)].
Nonlinearity truncate_nonlinearity_order(const Nonlinearity& nl, const OrderedPair& pair);

enum class SignBranch { plus, minus };

/// f_+(x,t) = f(x, t_+), f_-(x,t) = f(x, -t_-), primitives accumulated.
Nonlinearity truncate_nonlinearity_sign(const Nonlinearity& nl, SignBranch branch);

}  // namespace fraclab

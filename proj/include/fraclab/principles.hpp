#pragma once

#include <string>
#include <vector>

#include "fraclab/flap.hpp"
#include "fraclab/solvers.hpp"

namespace fraclab {

struct PrincipleVerdict {
  bool pass = false;
  int worst_node = -1;
  double margin = 0.0;
  std::string context;
};

/// Weak maximum principle: a certified supersolution with nonnegative data
/// satisfies min nodal u >= -tol, tol scaling with h and the data size.
PrincipleVerdict wmp_check(const StiffnessForm& form, const GridFunction& u,
                           const OrderCertificate& supersolution_certificate,
                           double rhs_sup_norm);

/// Strong maximum principle: strict positivity at every interior node of a
/// nonzero WMP-passing function.
PrincipleVerdict smp_check(const GridFunction& u);

/// Solution of a 1D zero-right-hand-side problem with prescribed exterior
/// data on a padded uniform grid; unknowns are the nodes strictly inside the
/// working region.
struct ExteriorSolve1D {
  std::vector<double> xs;      // uniform grid
  std::vector<double> values;  // nodal values (data + solved)
  std::vector<bool> fixed;     // true where the value is prescribed data
  double h = 0.0;
  double s = 0.5;

  double eval(double x) const;  // piecewise linear, zero outside the grid
};

/// Solves the zero-rhs problem on |x| in (r, R) with data 1 on [-r, r] and 0
/// outside (-R, R), then fits the largest c with phi >= c (R-|x|)^s at the
/// annulus nodes. Throws if the fitted constant is not positive.
struct BarrierResult {
  ExteriorSolve1D phi;
  double fitted_c = 0.0;
};
BarrierResult barrier(double r, double R, double s, int resolution);

/// Solves f = 0 on (a,b) with prescribed nonnegative exterior bump data on a
/// padded grid (1D instances for the local-boundedness diagnostic).
ExteriorSolve1D solve_exterior_data_1d(double a, double b, double s, int resolution,
                                       const std::function<double(double)>& exterior_data,
                                       double pad);

/// Minimum of u / delta^s over interior nodes and its location.
struct HopfQuotient {
  double min_quotient = 0.0;
  int argmin_node = -1;
};
HopfQuotient hopf_quotient(const GridFunction& u, const Domain& domain);

/// Weighted-Hoelder-to-data ratio ||u||_{alpha,delta} / ||f||_inf for a
/// solution of A u = M f.
double regularity_ratio(const GridFunction& u, const GridFunction& f, double alpha);

/// Local boundedness diagnostic: the implied constant of the sup bound
/// sup_{B_{r/2}} u <= k + Tail((u-k)_+; x0, r/2) + C (avg_{B_r} (u-k)_+^2)^{1/2}.
struct ImpliedConstant {
  double lhs = 0.0;
  double tail_term = 0.0;
  double l2_term = 0.0;
  double implied_c = 0.0;
  bool finite = true;
};
ImpliedConstant local_bound_check(const ExteriorSolve1D& u, double a, double b, double x0,
                                  double r, double k);

}  // namespace fraclab

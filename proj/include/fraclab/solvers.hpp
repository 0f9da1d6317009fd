#pragma once

#include <optional>
#include <string>

#include "fraclab/energy.hpp"

namespace fraclab {

enum class SolveStatus { converged, max_iter, diverged, singular_jacobian };

const char* to_string(SolveStatus s);

struct SolveOptions {
  double grad_tol_abs = 1e-9;
  double grad_tol_rel = 1e-10;  // times (1 + |Phi|)
  int max_iterations = 10000;
  double residual_tol = 1e-10;  // semilinear weak-form residual target
};

struct SolveReport {
  GridFunction solution;
  double energy = 0.0;
  double grad_norm = 0.0;
  std::optional<double> mu;            // ball multiplier, <= 0 at minimizers
  std::optional<double> c_multiplier;  // (1 - mu)^{-1}
  int iterations = 0;
  double weak_residual = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  std::string detail;
};

std::string solve_report_to_json(const SolveReport& report);

/// Unconstrained descent (gradient with backtracking, Newton near
/// stationarity). Intended for coercive functionals; unbounded descent is
/// reported as `diverged`.
SolveReport minimize_free(const EnergyFunctional& E, const GridFunction& init,
                          const SolveOptions& opts = {});

/// Minimization over the energy-norm ball ||u||_A <= eps by projected
/// descent (exact projection u -> eps u/||u||_A). Returns the Lagrange
/// multiplier mu <= 0 of the active constraint (0 at interior minimizers)
/// and C = (1-mu)^{-1} in (0,1].
SolveReport minimize_ball(const EnergyFunctional& E, double eps, const GridFunction& init,
                          const SolveOptions& opts = {});

/// Damped Newton iteration on A u = load(u). Resonant (singular) Jacobians
/// are reported distinctly from plain non-convergence.
SolveReport solve_semilinear(const EnergyFunctional& E, const GridFunction& init,
                             const SolveOptions& opts = {});

enum class OrderRole { sub, super };

struct OrderCertificate {
  OrderRole role = OrderRole::sub;
  bool pass = false;
  bool is_solution = false;  // both roles hold: excluded by the driver
  int worst_node = -1;       // node index of the worst residual component
  double margin = 0.0;       // signed worst residual component
};

/// Tests the residual r = A u - load(u) against all nonnegative nodal test
/// directions: super requires min r >= -tol, sub requires max r <= tol.
OrderCertificate check_order_residuals(const StiffnessForm& form, const Nonlinearity& nl,
                                       const GridFunction& u, OrderRole role, double tol = 1e-9);

/// Sub-supersolution driver: minimizes the order-truncated functional and
/// certifies the sandwich and the residual of the original equation.
SolveReport subsupersolution_solve(const StiffnessForm& form, const Nonlinearity& nl,
                                   const OrderedPair& pair, const SolveOptions& opts = {});

}  // namespace fraclab

#pragma once

#include <memory>

#include "fraclab/nonlinearity.hpp"
#include "fraclab/stiffness_form.hpp"

namespace fraclab {

/// Energy functional Phi(u) = u^T A u / 2 - integral of F(x, u_h), the
/// integral taken with the same per-element rule as the load vector so the
/// discrete gradient is exact.
struct EnergyFunctional {
  std::shared_ptr<const StiffnessForm> form;
  Nonlinearity nl;
};

double energy(const EnergyFunctional& E, const GridFunction& u);

/// Nodal residual A u - load(u) as a grid function (zero on the boundary);
/// vanishes exactly at discrete weak solutions.
GridFunction energy_gradient(const EnergyFunctional& E, const GridFunction& u);

/// Load vector over interior nodes: per-element quadrature of f(x, u_h) phi_i.
Eigen::VectorXd load_vector(const StiffnessForm& form, const Nonlinearity& nl,
                            const Eigen::VectorXd& u_interior);

/// Same quadrature, right-hand side given as nodal data g (independent of u).
Eigen::VectorXd data_load_vector(const StiffnessForm& form, const GridFunction& g);

/// Jacobian of the load vector (symmetric): per-element quadrature of
/// df/dt(x, u_h) phi_i phi_j.
Eigen::MatrixXd load_jacobian(const StiffnessForm& form, const Nonlinearity& nl,
                              const Eigen::VectorXd& u_interior);

double energy_interior(const EnergyFunctional& E, const Eigen::VectorXd& u_interior);
Eigen::VectorXd gradient_interior(const EnergyFunctional& E, const Eigen::VectorXd& u_interior);

}  // namespace fraclab

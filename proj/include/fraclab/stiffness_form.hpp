#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>

#include "fraclab/grid_function.hpp"
#include "fraclab/kernel.hpp"

namespace fraclab {

/// Discretization of the nonlocal energy inner product over the interior
/// hat-function basis, together with the consistent mass matrix. The energy
/// matrix is (normalization/2) times the full-space double integral of
/// (phi_i(x)-phi_i(y))(phi_j(x)-phi_j(y)) |x-y|^{-(N+2s)}, hat functions
/// extended by zero outside the domain, so that A u = M f discretizes the
/// normalized operator applied to u equals f.
struct StiffnessForm {
  std::shared_ptr<const Mesh> mesh;
  KernelSpec kernel;
  Eigen::MatrixXd A;  // interior x interior, symmetric positive definite
  Eigen::MatrixXd M;  // consistent mass, interior x interior

  int n() const { return static_cast<int>(A.rows()); }
};

/// Assembles the energy and mass matrices. In 1D the pair integrals have
/// closed forms (exact Toeplitz entries on the uniform grid); in 2D touching
/// element pairs are handled by singular quadrature and the complement mass
/// by a radial closed form plus graded quadrature.
StiffnessForm assemble_form(std::shared_ptr<const Mesh> mesh, const KernelSpec& kernel);

/// Convenience: standard kernel derived from the mesh's domain.
StiffnessForm assemble_form(std::shared_ptr<const Mesh> mesh);

/// u^T A v for grid functions with zero boundary values on the form's mesh.
double apply_form(const StiffnessForm& form, const GridFunction& u, const GridFunction& v);

/// Energy seminorm sqrt(u^T A u).
double seminorm(const StiffnessForm& form, const GridFunction& u);

/// Full-space interaction of two unit hat functions at node distance m*h on
/// a uniform 1D grid, for the raw (normalization 1) kernel. Exact closed
/// form via fourth differences of the kernel antiderivative.
double hat_pair_energy_1d(double h, double s, long long m);

/// Outer kernel mass w(x) = integral over the complement of the domain of
/// |x-y|^{-(N+2s)} dy (closed form on intervals, angular quadrature on disks).
double complement_kernel_mass(const Domain& domain, double s, const Point& x);

/// Raw pair integral of two global hats over a pair of triangles, for the
/// normalization-1 kernel: the hat of point p is affine on a triangle having
/// p as a vertex and zero on the other. Diagnostic/testing surface for the
/// 2D singular quadrature.
double hat_pair_interaction_2d(const std::array<Point, 3>& T, const std::array<Point, 3>& P,
                               const Point& a, const Point& b, double s);

std::string form_to_json(const StiffnessForm& form);
std::string form_to_coo_text(const StiffnessForm& form);

}  // namespace fraclab

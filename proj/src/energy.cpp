#include "fraclab/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "fraclab/norms.hpp"

namespace fraclab {

namespace {

// Evaluates u_h and the hat values at the element quadrature points; walks
// every element once and hands (point, weight, u value, hat values) to `emit`.
template <typename Emit>
void for_each_quad_point(const StiffnessForm& form, const Eigen::VectorXd& u_interior, Emit&& emit) {
  const Mesh& mesh = *form.mesh;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[e];
    ElementQuadrature q = element_quadrature(mesh, e);
    const int nv = el.size();
    for (size_t g = 0; g < q.points.size(); ++g) {
      const Point& p = q.points[g];
      double hats[3] = {0, 0, 0};
      if (nv == 2) {
        const double x0 = mesh.nodes[el.v[0]].x, x1 = mesh.nodes[el.v[1]].x;
        double t = (p.x - x0) / (x1 - x0);
        hats[0] = 1.0 - t;
        hats[1] = t;
      } else {
        const Point &a = mesh.nodes[el.v[0]], &b = mesh.nodes[el.v[1]], &c = mesh.nodes[el.v[2]];
        double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
        double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
        hats[0] = 1.0 - l1 - l2;
        hats[1] = l1;
        hats[2] = l2;
      }
      double uval = 0.0;
      for (int a = 0; a < nv; ++a) {
        int ii = mesh.interior_index[el.v[a]];
        if (ii >= 0) uval += hats[a] * u_interior[ii];
      }
      emit(el, nv, p, q.weights[g], uval, hats);
    }
  }
}

}  // namespace

Eigen::VectorXd load_vector(const StiffnessForm& form, const Nonlinearity& nl,
                            const Eigen::VectorXd& u_interior) {
  Eigen::VectorXd L = Eigen::VectorXd::Zero(form.n());
  const Mesh& mesh = *form.mesh;
  for_each_quad_point(form, u_interior,
                      [&](const Element& el, int nv, const Point& p, double w, double uval,
                          const double* hats) {
                        double fv = nl.f(p, uval);
                        if (!std::isfinite(fv))
                          throw std::runtime_error("load_vector: non-finite f at x = " +
                                                   std::to_string(p.x));
                        for (int a = 0; a < nv; ++a) {
                          int ii = mesh.interior_index[el.v[a]];
                          if (ii >= 0) L[ii] += w * fv * hats[a];
                        }
                      });
  return L;
}

Eigen::VectorXd data_load_vector(const StiffnessForm& form, const GridFunction& g) {
  if (g.mesh_ptr().get() != form.mesh.get())
    throw std::invalid_argument("data_load_vector: mesh mismatch");
  // consistent-mass pairing with the nodal interpolant of g
  Eigen::VectorXd gi = g.interior();
  return form.M * gi;
}

Eigen::MatrixXd load_jacobian(const StiffnessForm& form, const Nonlinearity& nl,
                              const Eigen::VectorXd& u_interior) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(form.n(), form.n());
  const Mesh& mesh = *form.mesh;
  for_each_quad_point(form, u_interior,
                      [&](const Element& el, int nv, const Point& p, double w, double uval,
                          const double* hats) {
                        double dv = nl.dfdt(p, uval);
                        for (int a = 0; a < nv; ++a) {
                          int ia = mesh.interior_index[el.v[a]];
                          if (ia < 0) continue;
                          for (int b = 0; b < nv; ++b) {
                            int ib = mesh.interior_index[el.v[b]];
                            if (ib >= 0) J(ia, ib) += w * dv * hats[a] * hats[b];
                          }
                        }
                      });
  return J;
}

double energy_interior(const EnergyFunctional& E, const Eigen::VectorXd& u_interior) {
  const StiffnessForm& form = *E.form;
  double quad = 0.5 * u_interior.dot(form.A * u_interior);
  double pot = 0.0;
  for_each_quad_point(form, u_interior,
                      [&](const Element&, int, const Point& p, double w, double uval, const double*) {
                        double Fv = E.nl.F(p, uval);
                        if (!std::isfinite(Fv))
                          throw std::runtime_error("energy: non-finite F at x = " +
                                                   std::to_string(p.x) + ", t = " +
                                                   std::to_string(uval));
                        pot += w * Fv;
                      });
  return quad - pot;
}

Eigen::VectorXd gradient_interior(const EnergyFunctional& E, const Eigen::VectorXd& u_interior) {
  return E.form->A * u_interior - load_vector(*E.form, E.nl, u_interior);
}

double energy(const EnergyFunctional& E, const GridFunction& u) {
  if (u.mesh_ptr().get() != E.form->mesh.get())
    throw std::invalid_argument("energy: mesh mismatch");
  if (!u.vanishes_on_boundary())
    throw std::invalid_argument("energy: nonzero boundary values");
  return energy_interior(E, u.interior());
}

GridFunction energy_gradient(const EnergyFunctional& E, const GridFunction& u) {
  if (u.mesh_ptr().get() != E.form->mesh.get())
    throw std::invalid_argument("energy_gradient: mesh mismatch");
  if (!u.vanishes_on_boundary())
    throw std::invalid_argument("energy_gradient: nonzero boundary values");
  return GridFunction::from_interior(E.form->mesh, gradient_interior(E, u.interior()));
}

}  // namespace fraclab

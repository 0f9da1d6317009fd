#include "fraclab/solvers.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "json.hpp"

namespace fraclab {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::singular_jacobian: return "singular-jacobian";
  }
  return "unknown";
}

std::string solve_report_to_json(const SolveReport& report) {
  nlohmann::json j;
  j["energy"] = report.energy;
  j["grad_norm"] = report.grad_norm;
  j["mu"] = report.mu ? nlohmann::json(*report.mu) : nlohmann::json();
  j["c_multiplier"] = report.c_multiplier ? nlohmann::json(*report.c_multiplier) : nlohmann::json();
  j["iterations"] = report.iterations;
  j["status"] = to_string(report.status);
  j["weak_residual"] = report.weak_residual;
  if (!report.detail.empty()) j["detail"] = report.detail;
  auto& vals = j["solution_node_values"] = nlohmann::json::array();
  for (int i = 0; i < report.solution.size(); ++i) vals.push_back(report.solution[i]);
  return j.dump();
}

namespace {

double grad_tolerance(const SolveOptions& opts, double phi) {
  return std::max(opts.grad_tol_abs, opts.grad_tol_rel * (1.0 + std::abs(phi)));
}

// Newton step on the residual with symmetric Jacobian A - dLoad; returns
// false when the factorization reports a (near-)singular matrix.
bool newton_direction(const EnergyFunctional& E, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& g, Eigen::VectorXd& dir) {
  Eigen::MatrixXd J = E.form->A - load_jacobian(*E.form, E.nl, u);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(J);
  if (ldlt.info() != Eigen::Success) return false;
  Eigen::VectorXd d = ldlt.vectorD();
  double dmax = d.cwiseAbs().maxCoeff();
  if (dmax <= 0.0 || d.cwiseAbs().minCoeff() < 1e-13 * dmax) return false;
  dir = -ldlt.solve(g);
  return dir.allFinite();
}

}  // namespace

SolveReport minimize_free(const EnergyFunctional& E, const GridFunction& init,
                          const SolveOptions& opts) {
  const StiffnessForm& form = *E.form;
  Eigen::VectorXd u = init.interior();
  double phi = energy_interior(E, u);
  const double phi0 = phi;
  Eigen::VectorXd g = gradient_interior(E, u);
  double step = 1.0 / (1.0 + form.A.norm());
  int it = 0;
  bool newton_phase = false;
  const double g0 = g.norm();

  for (; it < opts.max_iterations; ++it) {
    double gn = g.norm();
    if (gn <= grad_tolerance(opts, phi)) break;
    if (phi < -1e12 * (1.0 + std::abs(phi0))) {
      SolveReport rep{GridFunction::from_interior(form.mesh, u), phi, gn, {}, {}, it, gn,
                      SolveStatus::diverged, "unbounded energy descent"};
      return rep;
    }
    if (!newton_phase && gn <= 1e-3 * (1.0 + g0)) newton_phase = true;

    Eigen::VectorXd dir;
    bool have_newton = newton_phase && newton_direction(E, u, g, dir);
    if (have_newton && dir.dot(g) >= 0.0) have_newton = false;  // not a descent direction
    if (!have_newton) dir = -g;

    double t = have_newton ? 1.0 : step;
    double slope = g.dot(dir);
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      Eigen::VectorXd cand = u + t * dir;
      double phic = energy_interior(E, cand);
      if (phic <= phi + 1e-4 * t * slope) {
        u = cand;
        phi = phic;
        if (!have_newton) step = std::min(t * 2.0, 1e6);
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      if (have_newton) {
        newton_phase = false;  // retry with plain descent before giving up
        continue;
      }
      break;  // line search stagnated at the gradient scale
    }
    g = gradient_interior(E, u);
  }

  double gn = g.norm();
  SolveReport rep{GridFunction::from_interior(form.mesh, u), phi, gn, {}, {}, it, gn,
                  gn <= grad_tolerance(opts, phi) ? SolveStatus::converged : SolveStatus::max_iter,
                  ""};
  return rep;
}

SolveReport minimize_ball(const EnergyFunctional& E, double eps, const GridFunction& init,
                          const SolveOptions& opts) {
  if (!(eps > 0.0)) throw std::invalid_argument("minimize_ball: radius must be positive");
  const StiffnessForm& form = *E.form;
  Eigen::LLT<Eigen::MatrixXd> llt(form.A);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("minimize_ball: energy matrix not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();

  // w = L^T u turns the energy ball into the Euclidean ball ||w|| <= eps,
  // where the projection is exact scaling.
  auto to_u = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    return L.transpose().template triangularView<Eigen::Upper>().solve(w);
  };
  auto grad_w = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd gu = gradient_interior(E, u);
    return Eigen::VectorXd(L.template triangularView<Eigen::Lower>().solve(gu));
  };
  auto project = [&](Eigen::VectorXd w) {
    double n = w.norm();
    if (n > eps) w *= eps / n;
    return w;
  };

  Eigen::VectorXd w = project(L.transpose() * init.interior());
  Eigen::VectorXd u = to_u(w);
  double phi = energy_interior(E, u);
  Eigen::VectorXd g = grad_w(u);
  double step = 1.0;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    Eigen::VectorXd pg = w - project(w - g);
    if (pg.norm() <= grad_tolerance(opts, phi)) break;
    double t = step;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      Eigen::VectorXd wc = project(w - t * g);
      Eigen::VectorXd uc = to_u(wc);
      double phic = energy_interior(E, uc);
      if (phic <= phi - 1e-4 * (w - wc).squaredNorm() / std::max(t, 1e-300)) {
        // Barzilai-Borwein estimate for the next sweep
        Eigen::VectorXd gn = grad_w(uc);
        Eigen::VectorXd dw = wc - w, dg = gn - g;
        double denom = dw.dot(dg);
        step = denom > 0.0 ? std::clamp(dw.squaredNorm() / denom, 1e-8, 1e8) : t * 2.0;
        w = wc;
        u = uc;
        phi = phic;
        g = gn;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }

  Eigen::VectorXd residual = gradient_interior(E, u);
  Eigen::VectorXd Au = form.A * u;
  double norm_a = w.norm();  // == ||u||_A
  double mu = 0.0;
  std::string detail;
  if (norm_a >= eps * (1.0 - 1e-8)) {
    double denom = Au.squaredNorm();
    mu = denom > 0.0 ? residual.dot(Au) / denom : 0.0;
    double fit = (residual - mu * Au).norm();
    if (fit > 1e-6 * (1.0 + residual.norm()) * std::max(1.0, Au.norm()))
      detail = "multiplier fit residual " + std::to_string(fit);
  } else {
    mu = 0.0;
  }
  const double mu_tol = 1e-6 * (1.0 + std::abs(mu));
  if (mu > mu_tol)
    throw std::runtime_error("minimize_ball: positive multiplier " + std::to_string(mu) +
                             " (constraint qualification failure)");

  SolveReport rep{GridFunction::from_interior(form.mesh, u),
                  phi,
                  (w - project(w - g)).norm(),
                  mu,
                  1.0 / (1.0 - mu),
                  it,
                  (residual - mu * Au).norm(),
                  SolveStatus::converged,
                  detail};
  if (it >= opts.max_iterations) rep.status = SolveStatus::max_iter;
  return rep;
}

SolveReport solve_semilinear(const EnergyFunctional& E, const GridFunction& init,
                             const SolveOptions& opts) {
  const StiffnessForm& form = *E.form;
  Eigen::VectorXd u = init.interior();
  Eigen::VectorXd r = gradient_interior(E, u);
  const double scale = 1.0 + load_vector(form, E.nl, Eigen::VectorXd::Zero(form.n())).norm();
  int it = 0;
  const int max_newton = 200;
  for (; it < max_newton; ++it) {
    if (r.norm() <= opts.residual_tol * scale) break;
    Eigen::MatrixXd J = form.A - load_jacobian(form, E.nl, u);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    double rcond = lu.rcond();
    if (!lu.isInvertible() || rcond < 1e-13) {
      SolveReport rep{GridFunction::from_interior(form.mesh, u), energy_interior(E, u),
                      r.norm(), {}, {}, it, r.norm(), SolveStatus::singular_jacobian,
                      "Jacobian numerically singular (rcond " + std::to_string(rcond) +
                          "), likely eigenvalue resonance"};
      return rep;
    }
    Eigen::VectorXd d = lu.solve(-r);
    double t = 1.0;
    double rn = r.norm();
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      Eigen::VectorXd uc = u + t * d;
      Eigen::VectorXd rc = gradient_interior(E, uc);
      if (rc.norm() <= (1.0 - 1e-4 * t) * rn) {
        u = uc;
        r = rc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      SolveReport rep{GridFunction::from_interior(form.mesh, u), energy_interior(E, u),
                      r.norm(), {}, {}, it, r.norm(), SolveStatus::max_iter,
                      "Newton damping stagnated"};
      return rep;
    }
  }
  double rn = r.norm();
  SolveReport rep{GridFunction::from_interior(form.mesh, u), energy_interior(E, u), rn, {}, {},
                  it, rn,
                  rn <= opts.residual_tol * scale ? SolveStatus::converged : SolveStatus::max_iter,
                  ""};
  return rep;
}

OrderCertificate check_order_residuals(const StiffnessForm& form, const Nonlinearity& nl,
                                       const GridFunction& u, OrderRole role, double tol) {
  EnergyFunctional E{std::make_shared<StiffnessForm>(form), nl};
  Eigen::VectorXd r = gradient_interior(E, u.interior());
  double rmin = r.minCoeff(), rmax = r.maxCoeff();
  OrderCertificate cert;
  cert.role = role;
  double scale = 1.0 + r.cwiseAbs().maxCoeff();
  bool super_ok = rmin >= -tol * scale;
  bool sub_ok = rmax <= tol * scale;
  cert.is_solution = super_ok && sub_ok;
  cert.pass = role == OrderRole::super ? super_ok : sub_ok;
  int idx = 0;
  if (role == OrderRole::super) {
    r.minCoeff(&idx);
    cert.margin = rmin;
  } else {
    r.maxCoeff(&idx);
    cert.margin = rmax;
  }
  cert.worst_node = form.mesh->interior_nodes[idx];
  return cert;
}

SolveReport subsupersolution_solve(const StiffnessForm& form, const Nonlinearity& nl,
                                   const OrderedPair& pair, const SolveOptions& opts) {
  if (!nl.monotone)
    throw std::invalid_argument("subsupersolution_solve: nonlinearity must be flagged monotone");
  OrderCertificate sub = check_order_residuals(form, nl, *pair.lower, OrderRole::sub);
  if (!sub.pass)
    throw std::invalid_argument("subsupersolution_solve: lower candidate fails the subsolution "
                                "certificate (worst node " + std::to_string(sub.worst_node) + ")");
  OrderCertificate sup = check_order_residuals(form, nl, *pair.upper, OrderRole::super);
  if (!sup.pass)
    throw std::invalid_argument("subsupersolution_solve: upper candidate fails the supersolution "
                                "certificate (worst node " + std::to_string(sup.worst_node) + ")");

  auto form_ptr = std::make_shared<StiffnessForm>(form);
  Nonlinearity truncated = truncate_nonlinearity_order(nl, pair);
  EnergyFunctional Etrunc{form_ptr, truncated};

  GridFunction init(form.mesh);
  init.values() = 0.5 * (pair.lower->values() + pair.upper->values());
  for (int i = 0; i < init.size(); ++i)
    if (!form.mesh->is_interior[i]) init[i] = 0.0;

  SolveReport rep = minimize_free(Etrunc, init, opts);

  // Newton polish on the original equation from inside the order interval
  EnergyFunctional Eorig{form_ptr, nl};
  SolveReport polished = solve_semilinear(Eorig, rep.solution, opts);
  if (polished.status == SolveStatus::converged) rep = polished;

  const double band = 1e-9 * (1.0 + pair.upper->max_abs());
  for (int i = 0; i < rep.solution.size(); ++i) {
    if (!form.mesh->is_interior[i]) continue;
    if (rep.solution[i] < (*pair.lower)[i] - band || rep.solution[i] > (*pair.upper)[i] + band)
      throw std::runtime_error(
          "subsupersolution_solve: sandwich violated at node " + std::to_string(i) +
          " (false certificate or mesh too coarse)");
  }
  Eigen::VectorXd orig_res = gradient_interior(Eorig, rep.solution.interior());
  rep.weak_residual = orig_res.norm();
  rep.grad_norm = orig_res.norm();
  if (rep.weak_residual > 1e-8)
    rep.status = SolveStatus::max_iter;
  return rep;
}

}  // namespace fraclab

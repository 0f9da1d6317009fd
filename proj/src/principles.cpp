#include "fraclab/principles.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fraclab/norms.hpp"

namespace fraclab {

PrincipleVerdict wmp_check(const StiffnessForm& form, const GridFunction& u,
                           const OrderCertificate& cert, double rhs_sup_norm) {
  if (cert.role != OrderRole::super || !cert.pass)
    throw std::invalid_argument("wmp_check: requires a passing supersolution certificate");
  PrincipleVerdict v;
  const Mesh& mesh = *form.mesh;
  double tol = 1e-9 * std::max(rhs_sup_norm, 1.0) * std::max(mesh.h, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u.size(); ++i) {
    if (!mesh.is_interior[i]) continue;
    if (u[i] < worst) {
      worst = u[i];
      v.worst_node = i;
    }
  }
  v.margin = worst;
  v.pass = worst >= -tol;
  v.context = "weak maximum principle, min nodal value";
  return v;
}

PrincipleVerdict smp_check(const GridFunction& u) {
  if (u.max_abs() == 0.0)
    throw std::invalid_argument("smp_check: the zero function is excluded");
  const Mesh& mesh = u.mesh();
  PrincipleVerdict v;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u.size(); ++i) {
    if (!mesh.is_interior[i]) continue;
    if (u[i] < worst) {
      worst = u[i];
      v.worst_node = i;
    }
  }
  v.margin = worst;
  v.pass = worst > 0.0;
  v.context = "strong maximum principle, min interior value";
  return v;
}

double ExteriorSolve1D::eval(double x) const {
  if (xs.empty() || x <= xs.front() || x >= xs.back()) return 0.0;
  int i = static_cast<int>((x - xs.front()) / h);
  i = std::clamp(i, 0, static_cast<int>(xs.size()) - 2);
  double t = (x - xs[i]) / h;
  return (1.0 - t) * values[i] + t * values[i + 1];
}

namespace {

// Solves the homogeneous nonlocal equation on the unknown nodes of a padded
// uniform grid with prescribed values elsewhere (zero outside the grid).
void solve_padded(ExteriorSolve1D& grid) {
  const int n = static_cast<int>(grid.xs.size());
  std::vector<int> unknowns;
  for (int i = 0; i < n; ++i)
    if (!grid.fixed[i]) unknowns.push_back(i);
  const int m = static_cast<int>(unknowns.size());
  if (m == 0) return;
  std::vector<double> entry(n);
  for (int d = 0; d < n; ++d) entry[d] = hat_pair_energy_1d(grid.h, grid.s, d);

  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) A(a, b) = entry[std::abs(unknowns[a] - unknowns[b])];
    for (int j = 0; j < n; ++j)
      if (grid.fixed[j] && grid.values[j] != 0.0)
        rhs[a] -= entry[std::abs(unknowns[a] - j)] * grid.values[j];
  }
  Eigen::VectorXd sol = Eigen::LLT<Eigen::MatrixXd>(A).solve(rhs);
  for (int a = 0; a < m; ++a) grid.values[unknowns[a]] = sol[a];
}

}  // namespace

BarrierResult barrier(double r, double R, double s, int resolution) {
  if (!(0.0 < r && r < R)) throw std::invalid_argument("barrier: requires 0 < r < R");
  BarrierResult out;
  ExteriorSolve1D& g = out.phi;
  g.s = s;
  g.h = R / (resolution * std::max(1.0, std::ceil(R / (R - r))));
  // snap the grid so that -R, -r, r, R are nodes
  int nr = std::max(2, static_cast<int>(std::round(r / g.h)));
  int nR = std::max(nr + 2, static_cast<int>(std::round(R / g.h)));
  g.h = r / nr;
  nR = static_cast<int>(std::ceil(R / g.h));
  double Rsnap = nR * g.h;
  const int n = 2 * nR + 1;
  g.xs.resize(n);
  g.values.assign(n, 0.0);
  g.fixed.assign(n, false);
  for (int i = 0; i < n; ++i) {
    g.xs[i] = -Rsnap + i * g.h;
    double ax = std::abs(g.xs[i]);
    if (ax <= r + 1e-12 * r) {
      g.fixed[i] = true;
      g.values[i] = 1.0;
    } else if (ax >= Rsnap - 1e-12 * Rsnap) {
      g.fixed[i] = true;
      g.values[i] = 0.0;
    }
  }
  solve_padded(g);

  double c = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (g.fixed[i]) continue;
    double wt = std::pow(Rsnap - std::abs(g.xs[i]), s);
    c = std::min(c, g.values[i] / wt);
  }
  out.fitted_c = c;
  if (!(c > 0.0))
    throw std::runtime_error("barrier: fitted constant is not positive (c = " +
                             std::to_string(c) + ")");
  return out;
}

ExteriorSolve1D solve_exterior_data_1d(double a, double b, double s, int resolution,
                                       const std::function<double(double)>& exterior_data,
                                       double pad) {
  ExteriorSolve1D g;
  g.s = s;
  g.h = (b - a) / resolution;
  int npad = static_cast<int>(std::ceil(pad / g.h));
  const int n = resolution + 1 + 2 * npad;
  g.xs.resize(n);
  g.values.assign(n, 0.0);
  g.fixed.assign(n, true);
  for (int i = 0; i < n; ++i) {
    g.xs[i] = a - npad * g.h + i * g.h;
    if (g.xs[i] > a + 1e-12 && g.xs[i] < b - 1e-12)
      g.fixed[i] = false;
    else
      g.values[i] = exterior_data(g.xs[i]);
  }
  solve_padded(g);
  return g;
}

HopfQuotient hopf_quotient(const GridFunction& u, const Domain& domain) {
  const Mesh& mesh = u.mesh();
  HopfQuotient q;
  q.min_quotient = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u.size(); ++i) {
    if (!mesh.is_interior[i]) continue;
    if (u[i] < -1e-12 * (1.0 + u.max_abs()))
      throw std::invalid_argument("hopf_quotient: negative nodal value at node " +
                                  std::to_string(i));
    double d = boundary_distance(domain, mesh.nodes[i]);
    double val = u[i] / std::pow(d, domain.order());
    if (val < q.min_quotient) {
      q.min_quotient = val;
      q.argmin_node = i;
    }
  }
  if (u.max_abs() == 0.0)
    throw std::invalid_argument("hopf_quotient: the zero function is excluded");
  return q;
}

double regularity_ratio(const GridFunction& u, const GridFunction& f, double alpha) {
  double fs = lp_norm(f, std::numeric_limits<double>::infinity());
  if (fs <= 0.0) throw std::invalid_argument("regularity_ratio: data must be nonzero");
  return weighted_holder_norm(u, alpha) / fs;
}

ImpliedConstant local_bound_check(const ExteriorSolve1D& u, double a, double b, double x0,
                                  double r, double k) {
  if (!(x0 - r >= a && x0 + r <= b))
    throw std::invalid_argument("local_bound_check: ball not contained in the domain");
  ImpliedConstant out;

  // sup of u over nodes in B_{r/2}
  out.lhs = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < u.xs.size(); ++i)
    if (std::abs(u.xs[i] - x0) <= 0.5 * r) out.lhs = std::max(out.lhs, u.values[i]);

  // Tail((u-k)_+; x0, r/2): piecewise-linear integrand over the grid support,
  // with a closed-form contribution of the constant (0-k)_+ beyond the grid.
  const double s = u.s;
  const double rr = 0.5 * r;
  auto integrand = [&](double x) {
    double v = std::max(u.eval(x) - k, 0.0);
    return v * std::pow(std::abs(x - x0), -(1.0 + 2.0 * s));
  };
  double acc = 0.0;
  const int nq = 2000;
  double lo = u.xs.front(), hi = u.xs.back();
  for (int g = 0; g < nq; ++g) {
    double x = lo + (g + 0.5) * (hi - lo) / nq;
    if (std::abs(x - x0) <= rr) continue;
    acc += integrand(x) * (hi - lo) / nq;
  }
  if (k < 0.0) {
    // (0-k)_+ = -k outside the padded grid
    auto far = [&](double d) { return std::pow(d, -2.0 * s) / (2.0 * s); };
    acc += -k * (far(std::max(x0 - lo, rr)) + far(std::max(hi - x0, rr)));
  }
  out.tail_term = std::pow(rr, 2.0 * s) * acc;

  // averaged L2 term over B_r
  double l2 = 0.0;
  const int nq2 = 2000;
  for (int g = 0; g < nq2; ++g) {
    double x = x0 - r + (g + 0.5) * (2.0 * r) / nq2;
    double v = std::max(u.eval(x) - k, 0.0);
    l2 += v * v * (2.0 * r) / nq2;
  }
  out.l2_term = std::sqrt(l2 / (2.0 * r));

  double numer = out.lhs - k - out.tail_term;
  if (out.l2_term <= 1e-14) {
    out.finite = numer <= 1e-12;
    out.implied_c = out.finite ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    out.implied_c = std::max(0.0, numer / out.l2_term);
  }
  return out;
}

}  // namespace fraclab

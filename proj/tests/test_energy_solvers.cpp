#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <random>

#include "fraclab/eigensolver.hpp"
#include "fraclab/solvers.hpp"

using namespace fraclab;

namespace {

struct Setup {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<StiffnessForm> form;
};

Setup make_setup(int res = 48, double s = 0.5) {
  Setup st;
  st.mesh = build_mesh(Domain::interval(-1.0, 1.0, s), res);
  st.form = std::make_shared<StiffnessForm>(assemble_form(st.mesh));
  return st;
}

GridFunction random_fn(const Setup& st, unsigned seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  GridFunction u(st.mesh);
  for (int i = 0; i < u.size(); ++i) u[i] = st.mesh->is_interior[i] ? scale * g(rng) : 0.0;
  return u;
}

}  // namespace

TEST_CASE("energy basics: zero at zero, quadratic part for f = 0") {
  Setup st = make_setup(32);
  EnergyFunctional E{st.form, nl_zero()};
  GridFunction zero(st.mesh);
  CHECK(energy(E, zero) == 0.0);
  GridFunction u = random_fn(st, 1);
  CHECK(energy(E, u) == doctest::Approx(0.5 * apply_form(*st.form, u, u)).epsilon(1e-12));
}

TEST_CASE("gradient is the exact derivative of the quadrature energy") {
  Setup st = make_setup(24);
  for (const auto& nl : {nl_cubic(1.0), nl_arctan_plus(), nl_cubic_soft(2.0, 1.0)}) {
    EnergyFunctional E{st.form, nl};
    GridFunction u = random_fn(st, 2);
    GridFunction v = random_fn(st, 3);
    GridFunction g = energy_gradient(E, u);
    double pairing = g.interior().dot(v.interior());
    double err_prev = 1e300;
    for (double h : {1e-3, 1e-4}) {
      GridFunction up(st.mesh), um(st.mesh);
      up.values() = u.values() + h * v.values();
      um.values() = u.values() - h * v.values();
      double fd = (energy(E, up) - energy(E, um)) / (2.0 * h);
      double err = std::abs(fd - pairing) / (1.0 + std::abs(pairing));
      CHECK(err <= 1e-6);
      // O(h^2) decay of the central difference
      if (err > 1e-12) CHECK(err <= err_prev * 0.05);
      err_prev = err;
    }
  }
}

TEST_CASE("gradient vanishes at zero for f(x,0) = 0 and energy of eigen-rays") {
  Setup st = make_setup(48);
  EnergyFunctional E{st.form, nl_linear(1.0)};
  GridFunction zero(st.mesh);
  CHECK(energy_gradient(E, zero).max_abs() == doctest::Approx(0.0));

  auto pairs = eigenpairs(*st.form, 1);
  EnergyFunctional Eres{st.form, nl_linear(pairs[0].lambda)};
  for (double c : {0.5, 2.0}) {
    GridFunction cu(st.mesh);
    cu.values() = c * pairs[0].phi.values();
    CHECK(energy(Eres, cu) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("gradient residual at the interpolated torsion profile shrinks under refinement") {
  double prev = 1e300;
  for (int res : {32, 64, 128}) {
    Setup st = make_setup(res);
    EnergyFunctional E{st.form, nl_constant(1.0)};
    GridFunction u(st.mesh);
    for (int i = 0; i < u.size(); ++i) {
      double x = st.mesh->nodes[i].x;
      u[i] = std::sqrt(std::max(1.0 - x * x, 0.0));
    }
    double r = energy_gradient(E, u).interior().cwiseAbs().maxCoeff();
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("minimize_free: strictly convex cases land on the unique minimizer") {
  Setup st = make_setup(48);
  EnergyFunctional Ezero{st.form, nl_zero()};
  SolveReport rep = minimize_free(Ezero, random_fn(st, 4));
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.solution.max_abs() <= 1e-7);

  double lambda1 = eigenpairs(*st.form, 1)[0].lambda;
  EnergyFunctional Esub{st.form, nl_linear(0.5 * lambda1)};
  SolveReport rep2 = minimize_free(Esub, random_fn(st, 5));
  CHECK(rep2.status == SolveStatus::converged);
  CHECK(rep2.solution.max_abs() <= 1e-6);
}

TEST_CASE("minimize_free: torsion instance reproduces the closed form") {
  Setup st = make_setup(64);
  EnergyFunctional E{st.form, nl_constant(1.0)};
  SolveReport rep = minimize_free(E, GridFunction(st.mesh));
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.solution.eval({0.0, 0.0}) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("minimize_free flags unbounded descent") {
  Setup st = make_setup(24);
  double lambda1 = eigenpairs(*st.form, 1)[0].lambda;
  EnergyFunctional E{st.form, nl_linear(3.0 * lambda1)};  // concave direction along phi1
  SolveReport rep = minimize_free(E, random_fn(st, 6));
  CHECK(rep.status == SolveStatus::diverged);
}

TEST_CASE("minimize_ball: interior and boundary regimes with the eigen oracle") {
  Setup st = make_setup(48);
  auto pairs = eigenpairs(*st.form, 2);
  const double lambda1 = pairs[0].lambda;

  SUBCASE("f = 0 stays at the origin with zero multiplier") {
    EnergyFunctional E{st.form, nl_zero()};
    SolveReport rep = minimize_ball(E, 1.0, random_fn(st, 7));
    CHECK(rep.solution.max_abs() <= 1e-8);
    CHECK(rep.mu.value() == doctest::Approx(0.0));
    CHECK(rep.c_multiplier.value() == doctest::Approx(1.0));
  }
  SUBCASE("subcritical linear problem has an interior minimizer at zero") {
    EnergyFunctional E{st.form, nl_linear(0.5 * lambda1)};
    SolveReport rep = minimize_ball(E, 1.0, random_fn(st, 8));
    CHECK(rep.solution.max_abs() <= 1e-6);
    CHECK(rep.mu.value() == doctest::Approx(0.0));
  }
  SUBCASE("supercritical linear problem pins the boundary along phi1") {
    const double lambda = 2.0 * lambda1;
    const double eps = 0.7;
    EnergyFunctional E{st.form, nl_linear(lambda)};
    SolveReport rep = minimize_ball(E, eps, random_fn(st, 9));
    CHECK(rep.mu.value() == doctest::Approx(1.0 - lambda / lambda1).epsilon(1e-4));
    CHECK(rep.c_multiplier.value() == doctest::Approx(0.5).epsilon(1e-4));
    // minimizer = +- eps phi1 / ||phi1||_A
    Eigen::VectorXd u = rep.solution.interior();
    Eigen::VectorXd phi = pairs[0].phi.interior();
    double cos = std::abs(u.dot(st.form->M * phi)) /
                 std::sqrt(u.dot(st.form->M * u) * phi.dot(st.form->M * phi));
    CHECK(cos > 0.999);
    CHECK(seminorm(*st.form, rep.solution) == doctest::Approx(eps).epsilon(1e-8));
    // rescaled-problem identity: A u = C M f(u)
    Eigen::VectorXd resid =
        st.form->A * u - rep.c_multiplier.value() * lambda * (st.form->M * u);
    CHECK(resid.norm() <= 1e-6 * (st.form->A * u).norm());
  }
  CHECK_THROWS_AS(minimize_ball(EnergyFunctional{st.form, nl_zero()}, -1.0, random_fn(st, 10)),
                  std::invalid_argument);
}

TEST_CASE("solve_semilinear: torsion, zero, and resonance reporting") {
  Setup st = make_setup(48);
  EnergyFunctional Ezero{st.form, nl_zero()};
  SolveReport rep0 = solve_semilinear(Ezero, random_fn(st, 11));
  CHECK(rep0.status == SolveStatus::converged);
  CHECK(rep0.solution.max_abs() <= 1e-10);

  EnergyFunctional Etor{st.form, nl_constant(1.0)};
  SolveReport rept = solve_semilinear(Etor, GridFunction(st.mesh));
  CHECK(rept.status == SolveStatus::converged);
  CHECK(rept.weak_residual <= 1e-10);
  CHECK(rept.solution.eval({0.0, 0.0}) == doctest::Approx(1.0).epsilon(0.05));

  // resonance: f(t) = lambda1 t + 1 with the DISCRETE lambda1
  double lambda1 = eigenpairs(*st.form, 1)[0].lambda;
  EnergyFunctional Eres{st.form, nl_linear_plus_constant(lambda1, 1.0)};
  SolveReport repr = solve_semilinear(Eres, GridFunction(st.mesh));
  CHECK(repr.status == SolveStatus::singular_jacobian);
}

TEST_CASE("level-truncated energies converge to the full energy") {
  Setup st = make_setup(32);
  Nonlinearity cubic = nl_cubic(1.0);
  GridFunction u = random_fn(st, 12, 2.0);
  EnergyFunctional Efull{st.form, cubic};
  double full = energy(Efull, u);
  double prev_err = 1e300;
  for (double k : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    EnergyFunctional Ek{st.form, truncate_nonlinearity_level(cubic, k)};
    double err = std::abs(energy(Ek, u) - full);
    CHECK(err <= prev_err + 1e-12);
    prev_err = err;
  }
  CHECK(prev_err <= 1e-9 * (1.0 + std::abs(full)));
}

TEST_CASE("order residual certificates") {
  Setup st = make_setup(48);
  Nonlinearity nl = nl_arctan_plus();

  // u = 0 with f(x,0) = 1: a strict subsolution, not a solution
  GridFunction zero(st.mesh);
  OrderCertificate sub = check_order_residuals(*st.form, nl, zero, OrderRole::sub);
  CHECK(sub.pass);
  CHECK_FALSE(sub.is_solution);
  CHECK(sub.margin < 0.0);

  // the exact discrete solution passes both roles and is flagged
  SolveReport sol = solve_semilinear(EnergyFunctional{st.form, nl}, GridFunction(st.mesh));
  REQUIRE(sol.status == SolveStatus::converged);
  OrderCertificate both = check_order_residuals(*st.form, nl, sol.solution, OrderRole::super);
  CHECK(both.pass);
  CHECK(both.is_solution);

  // 3x torsion is a supersolution for arctan + 1
  GridFunction torsion = solve_semilinear(EnergyFunctional{st.form, nl_constant(1.0)},
                                          GridFunction(st.mesh))
                             .solution;
  GridFunction upper(st.mesh);
  upper.values() = 3.0 * torsion.values();
  OrderCertificate sup = check_order_residuals(*st.form, nl, upper, OrderRole::super);
  CHECK(sup.pass);
  CHECK_FALSE(sup.is_solution);
}

TEST_CASE("sub-supersolution driver sandwiches and solves the original equation") {
  Setup st = make_setup(48);
  Nonlinearity nl = nl_arctan_plus();
  GridFunction torsion = solve_semilinear(EnergyFunctional{st.form, nl_constant(1.0)},
                                          GridFunction(st.mesh))
                             .solution;
  GridFunction lower(st.mesh), upper(st.mesh);
  upper.values() = 3.0 * torsion.values();
  OrderedPair pair(lower, upper);
  SolveReport rep = subsupersolution_solve(*st.form, nl, pair);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.weak_residual <= 1e-8);
  for (int i = 0; i < rep.solution.size(); ++i) {
    if (!st.mesh->is_interior[i]) continue;
    CHECK(rep.solution[i] > 0.0);
    CHECK(rep.solution[i] < upper[i]);
  }

  // degenerate pair: lower = upper = exact solution is returned unchanged
  SolveReport exact = solve_semilinear(EnergyFunctional{st.form, nl}, GridFunction(st.mesh));
  OrderedPair pinned(exact.solution, exact.solution);
  SolveReport rep2 = subsupersolution_solve(*st.form, nl, pinned);
  CHECK((rep2.solution.values() - exact.solution.values()).cwiseAbs().maxCoeff() <= 1e-7);

  // f = 0 with any ordered pair through zero returns zero
  GridFunction deep(st.mesh);
  for (int i = 0; i < deep.size(); ++i) deep[i] = st.mesh->is_interior[i] ? -2.0 : 0.0;
  OrderedPair through_zero(deep, upper);
  SolveReport rep3 = subsupersolution_solve(*st.form, nl_zero(), through_zero);
  CHECK(rep3.solution.max_abs() <= 1e-8);

  // non-monotone flag is rejected
  Nonlinearity notmono = nl_cubic_soft(1.0, 1.0);
  CHECK_THROWS_AS(subsupersolution_solve(*st.form, notmono, pair), std::invalid_argument);
}

TEST_CASE("solve report serializes to JSON") {
  Setup st = make_setup(16);
  SolveReport rep = solve_semilinear(EnergyFunctional{st.form, nl_constant(1.0)},
                                     GridFunction(st.mesh));
  std::string j = solve_report_to_json(rep);
  CHECK(j.find("\"energy\"") != std::string::npos);
  CHECK(j.find("\"status\":\"converged\"") != std::string::npos);
  CHECK(j.find("solution_node_values") != std::string::npos);
}

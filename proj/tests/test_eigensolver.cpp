#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <random>

#include "fraclab/eigensolver.hpp"

using namespace fraclab;

TEST_CASE("eigenpairs match the dense generalized solver") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 48);
  StiffnessForm form = assemble_form(mesh);
  auto pairs = eigenpairs(form, 5);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense(form.A, form.M);
  REQUIRE(dense.info() == Eigen::Success);
  for (int i = 0; i < 5; ++i)
    CHECK(pairs[i].lambda == doctest::Approx(dense.eigenvalues()[i]).epsilon(1e-8));
}

TEST_CASE("eigen structure: positivity, ordering, normalization, sign, Rayleigh") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 64);
  StiffnessForm form = assemble_form(mesh);
  auto pairs = eigenpairs(form, 3);
  CHECK(pairs[0].lambda > 0.0);
  CHECK(pairs[0].lambda < pairs[1].lambda);
  CHECK(pairs[1].lambda < pairs[2].lambda);
  for (const auto& p : pairs) {
    Eigen::VectorXd v = p.phi.interior();
    CHECK(v.dot(form.M * v) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(p.residual <= 1e-8);
  }
  // positive nodal-mean sign convention and Rayleigh identity
  CHECK(pairs[0].phi.interior().sum() > 0.0);
  CHECK(seminorm(form, pairs[0].phi) == doctest::Approx(std::sqrt(pairs[0].lambda)).epsilon(1e-9));
  // the first eigenfunction of the nonlocal form has one sign
  for (int i = 0; i < pairs[0].phi.size(); ++i)
    if (mesh->is_interior[i]) CHECK(pairs[0].phi[i] > 0.0);
}

TEST_CASE("lambda1 for s = 1/2 on (-1,1) sits in (1.0, 1.3) after extrapolation") {
  std::vector<double> lambdas;
  for (int res : {64, 128}) {
    auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), res);
    StiffnessForm form = assemble_form(mesh);
    lambdas.push_back(eigenpairs(form, 1)[0].lambda);
  }
  // first-order Richardson in h
  double extrap = 2.0 * lambdas[1] - lambdas[0];
  CHECK(extrap > 1.0);
  CHECK(extrap < 1.3);
  CHECK(lambdas[1] > 1.0);
  CHECK(lambdas[1] < 1.3);
}

TEST_CASE("discrete fractional Poincare inequality") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.3), 32);
  StiffnessForm form = assemble_form(mesh);
  double lambda1 = eigenpairs(form, 1)[0].lambda;
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int t = 0; t < 40; ++t) {
    Eigen::VectorXd v(form.n());
    for (int i = 0; i < form.n(); ++i) v[i] = g(rng);
    CHECK(v.dot(form.A * v) >= lambda1 * v.dot(form.M * v) * (1.0 - 1e-10));
  }
}

TEST_CASE("apply_form of the normalized first eigenfunction returns lambda1") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 32);
  StiffnessForm form = assemble_form(mesh);
  auto pairs = eigenpairs(form, 1);
  CHECK(apply_form(form, pairs[0].phi, pairs[0].phi) ==
        doctest::Approx(pairs[0].lambda).epsilon(1e-10));
}

TEST_CASE("count bounds are enforced and CSV export is well-formed") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 8);
  StiffnessForm form = assemble_form(mesh);
  CHECK_THROWS_AS(eigenpairs(form, 0), std::invalid_argument);
  CHECK_THROWS_AS(eigenpairs(form, form.n()), std::invalid_argument);
  auto pairs = eigenpairs(form, 2);
  std::string csv = eigenpairs_to_csv(pairs);
  CHECK(csv.rfind("index,lambda,residual\n", 0) == 0);
}

TEST_CASE("disk eigenvalues: positive, ordered, refinement-sane") {
  auto mesh = build_mesh(Domain::disk({0.0, 0.0}, 1.0, 0.5), 4);
  StiffnessForm form = assemble_form(mesh);
  auto pairs = eigenpairs(form, 2);
  CHECK(pairs[0].lambda > 0.0);
  CHECK(pairs[0].lambda < pairs[1].lambda);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fraclab/norms.hpp"

using namespace fraclab;

namespace {

std::shared_ptr<const Mesh> unit_mesh(int res = 64, double s = 0.5) {
  return build_mesh(Domain::interval(0.0, 1.0, s), res);
}

GridFunction interpolate(std::shared_ptr<const Mesh> mesh, double (*f)(double)) {
  GridFunction u(mesh);
  for (int i = 0; i < u.size(); ++i) u[i] = f(mesh->nodes[i].x);
  return u;
}

}  // namespace

TEST_CASE("lp norm basics") {
  auto mesh = unit_mesh();
  GridFunction zero(mesh);
  CHECK(lp_norm(zero, 1.0) == 0.0);
  CHECK(lp_norm(zero, std::numeric_limits<double>::infinity()) == 0.0);

  GridFunction one(mesh);
  one.values().setOnes();
  CHECK(lp_norm(one, 2.0) == doctest::Approx(1.0).epsilon(1e-12));

  GridFunction lin = interpolate(mesh, [](double x) { return x; });
  CHECK(lp_norm(lin, 2.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(lp_norm(lin, 0.5), std::invalid_argument);
}

TEST_CASE("lp norm is homogeneous and Hoelder-interpolates on finite measure") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 48);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  double measure = mesh->measure();
  for (int trial = 0; trial < 25; ++trial) {
    GridFunction u(mesh);
    for (int i = 0; i < u.size(); ++i) u[i] = g(rng);
    double c = g(rng);
    GridFunction cu(mesh);
    cu.values() = c * u.values();
    double p = 1.0 + 4.0 * std::abs(g(rng));
    double r = p + 2.0 * std::abs(g(rng));
    CHECK(lp_norm(cu, p) == doctest::Approx(std::abs(c) * lp_norm(u, p)).epsilon(1e-10));
    CHECK(lp_norm(u, p) <=
          std::pow(measure, 1.0 / p - 1.0 / r) * lp_norm(u, r) * (1.0 + 1e-10));
  }
}

TEST_CASE("large-exponent norms stay finite and approach the sup") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 128);
  GridFunction u = interpolate(mesh, [](double x) { return 3.0 * std::sqrt(std::max(1.0 - x * x, 0.0)); });
  double n1000 = lp_norm(u, 1000.0);
  CHECK(std::isfinite(n1000));
  CHECK(n1000 == doctest::Approx(3.0).epsilon(5e-3));
}

TEST_CASE("weighted sup norm simplifies for the torsion profile at s = 1/2") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 256);
  GridFunction u = interpolate(mesh, [](double x) { return std::sqrt(std::max(1.0 - x * x, 0.0)); });
  // u/delta^s = (1+|x|)^{1/2}, sup approaches sqrt(2) at the boundary
  CHECK(weighted_sup_norm(u) == doctest::Approx(std::sqrt(2.0)).epsilon(5e-3));
  GridFunction zero(mesh);
  CHECK(weighted_sup_norm(zero) == 0.0);

  GridFunction bad(mesh);
  bad[0] = 1.0;
  CHECK_THROWS_AS(weighted_sup_norm(bad), std::invalid_argument);
}

TEST_CASE("weighted sup norm is absolutely homogeneous") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 32);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  GridFunction u(mesh);
  for (int i = 0; i < u.size(); ++i) u[i] = mesh->is_interior[i] ? g(rng) : 0.0;
  for (double c : {-3.5, -1.0, 0.0, 0.25, 7.0})
    CHECK(weighted_sup_norm([&] {
            GridFunction cu(mesh);
            cu.values() = c * u.values();
            return cu;
          }()) == doctest::Approx(std::abs(c) * weighted_sup_norm(u)).epsilon(1e-12));
}

TEST_CASE("weighted Hoelder norm: constant quotient has vanishing seminorm") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 64);
  const double c = 1.7;
  GridFunction u(mesh);
  for (int i = 0; i < u.size(); ++i) {
    double d = boundary_distance(mesh->domain, mesh->nodes[i]);
    u[i] = c * std::sqrt(d);
  }
  CHECK(weighted_holder_norm(u, 0.25) == doctest::Approx(c).epsilon(1e-10));
  CHECK_THROWS_AS(weighted_holder_norm(u, 1.5), std::invalid_argument);
  GridFunction zero(mesh);
  CHECK(weighted_holder_norm(zero, 0.3) == 0.0);
}

TEST_CASE("weighted Hoelder norm of the torsion profile is refinement-stable") {
  // quotient (1+|x|)^{1/2} is Lipschitz, hence alpha-Hoelder for alpha < 1;
  // oracle = dense-grid evaluation of the continuum quotient
  const double alpha = 0.25;
  double dense = 0.0;
  {
    const int n = 2000;
    std::vector<double> xs(n), q(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = -1.0 + 2.0 * (i + 0.5) / n;
      q[i] = std::sqrt(1.0 + std::abs(xs[i]));
    }
    double semi = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; j += 7)
        semi = std::max(semi, std::abs(q[i] - q[j]) / std::pow(std::abs(xs[i] - xs[j]), alpha));
    double sup = std::sqrt(2.0);
    dense = sup + semi;
  }
  double prev = 0.0;
  for (int res : {64, 128, 256}) {
    auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), res);
    GridFunction u(mesh);
    for (int i = 0; i < u.size(); ++i) {
      double x = mesh->nodes[i].x;
      u[i] = std::sqrt(std::max(1.0 - x * x, 0.0));
    }
    double val = weighted_holder_norm(u, alpha);
    CHECK(std::isfinite(val));
    CHECK(val == doctest::Approx(dense).epsilon(0.05));
    if (prev > 0.0) CHECK(std::abs(val - prev) <= 0.05 * prev);
    prev = val;
  }
}

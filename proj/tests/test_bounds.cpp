#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <random>

#include "fraclab/bounds.hpp"
#include "fraclab/norms.hpp"
#include "fraclab/stiffness_form.hpp"

using namespace fraclab;

TEST_CASE("elementary inequality: pinned arithmetic examples") {
  // r = 2 collapses both sides to (a-b)^2
  CHECK(elementary_inequality_gap(1.0, 0.0, 2.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  // inactive truncation: LHS 7, RHS 6.75
  CHECK(elementary_inequality_gap(2.0, 1.0, 4.0, 10.0) == doctest::Approx(0.25));
  // active truncation at k = 1.5: LHS 3.5, RHS 3
  CHECK(elementary_inequality_gap(2.0, 1.0, 4.0, 1.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(elementary_inequality_gap(1.0, 0.0, 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(elementary_inequality_gap(1.0, 0.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("elementary inequality fuzz: gap nonnegative, equality at r = 2") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ab(-1e3, 1e3), rr(2.0, 50.0), kk(1e-3, 1e3);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double gap = elementary_inequality_gap(ab(rng), ab(rng), rr(rng), kk(rng));
    worst = std::min(worst, gap);
  }
  CHECK(worst >= -1e-12);
  for (int i = 0; i < 2000; ++i) {
    double gap = elementary_inequality_gap(ab(rng), ab(rng), 2.0, kk(rng));
    CHECK(std::abs(gap) <= 1e-12);
  }
  // degenerate equal arguments
  CHECK(elementary_inequality_gap(5.0, 5.0, 7.0, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("moser ladder: fixed point, explicit sequences, divergence classification") {
  // N = 3, s = 3/4: 2*_s = 4, gamma^2 = 2, mu0 = (q-2)/(gamma^2-1)
  MoserLadder fixed = moser_ladder(3.0, 3, 0.75, 1.0, 8);
  CHECK(fixed.gamma_sq == doctest::Approx(2.0));
  CHECK(fixed.mu0 == doctest::Approx(1.0));
  CHECK_FALSE(fixed.diverges);
  for (double r : fixed.exponents) CHECK(r == 1.0);

  // subcritical start mu = 2*_s + 2 - q = 3: the recursion gives 3, 5, 9, 17
  double mu_sub = moser_subcritical_start(3.0, 3, 0.75);
  CHECK(mu_sub == doctest::Approx(3.0));
  MoserLadder sub = moser_ladder(3.0, 3, 0.75, mu_sub, 3);
  CHECK(sub.exponents == std::vector<double>{3.0, 5.0, 9.0, 17.0});
  CHECK(sub.diverges);

  // critical start q = 4: mu = q(q+1)/2 + 2 - q = 8, ladder 8, 14, 26; mu0 = 2
  double mu_crit = moser_critical_start(4.0);
  CHECK(mu_crit == doctest::Approx(8.0));
  MoserLadder crit = moser_ladder(4.0, 3, 0.75, mu_crit, 2);
  CHECK(crit.exponents == std::vector<double>{8.0, 14.0, 26.0});
  CHECK(crit.mu0 == doctest::Approx(2.0));
  CHECK(crit.diverges);

  CHECK_THROWS_AS(moser_ladder(3.0, 1, 0.5, 1.0, 4), std::invalid_argument);
}

TEST_CASE("moser ladder: the fixed point is repelling") {
  // gamma^2 > 1 makes the affine map expanding: starts below mu0 fall away
  // monotonically and never escape to +infinity
  MoserLadder L = moser_ladder(3.0, 3, 0.75, 0.25, 40);
  CHECK_FALSE(L.diverges);
  for (size_t i = 1; i < L.exponents.size(); ++i) {
    CHECK(L.exponents[i] < L.exponents[i - 1]);
    CHECK(L.exponents[i] < L.mu0);
  }
  // distance from the fixed point grows by exactly gamma^2 per rung
  CHECK(L.exponents[1] - L.mu0 ==
        doctest::Approx(L.gamma_sq * (L.exponents[0] - L.mu0)).epsilon(1e-14));
}

TEST_CASE("moser ladder divergence iff start above mu0 (random tuples)") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    int N = 1 + static_cast<int>(uni(rng) * 3.0);
    double s = 0.05 + 0.9 * uni(rng);
    if (N <= 2.0 * s) {
      CHECK_THROWS_AS(moser_ladder(3.0, N, s, 1.0, 4), std::invalid_argument);
      continue;
    }
    double twostar = 2.0 * N / (N - 2.0 * s);
    double q = 2.0 + (twostar - 2.0) * uni(rng);
    double mu = 4.0 * uni(rng);
    MoserLadder L = moser_ladder(q, N, s, mu, 200);
    CHECK(L.diverges == (mu > L.mu0));
    if (L.diverges)
      CHECK(L.exponents.back() > 1e3);
    else
      CHECK(L.exponents.back() <= L.mu0 + 1e-9 * std::max(1.0, std::abs(L.mu0)));
  }
}

namespace {

GridFunction torsion_like(std::shared_ptr<const Mesh> mesh) {
  StiffnessForm form = assemble_form(mesh);
  GridFunction one(mesh);
  for (int i = 0; i < one.size(); ++i) one[i] = 1.0;
  Eigen::VectorXd u = Eigen::LLT<Eigen::MatrixXd>(form.A).solve(form.M * one.interior());
  return GridFunction::from_interior(mesh, u);
}

}  // namespace

TEST_CASE("tail smallness level") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 64);
  GridFunction zero(mesh);
  CHECK(tail_smallness_level(zero, 4.0, 1e-3) == 0.0);

  // small critical norm already satisfies the bound with K0 = 0
  GridFunction tiny(mesh);
  for (int i = 0; i < tiny.size(); ++i) tiny[i] = mesh->is_interior[i] ? 1e-6 : 0.0;
  CHECK(tail_smallness_level(tiny, 4.0, 1e-3) == 0.0);

  GridFunction u = torsion_like(mesh);
  // sigma loose enough that a strictly interior level suffices (very small
  // sigma needs the top nodal level: even the thinnest superlevel slab has
  // integral^{1/2} of order sqrt(h))
  double k0 = tail_smallness_level(u, 4.0, 0.5);
  CHECK(k0 > 0.0);
  CHECK(k0 < u.max_abs());
  // monotone nonincreasing in sigma
  double prev = -1.0;
  for (double sigma : {1e-4, 1e-3, 1e-2, 1e-1, 0.5, 1.5}) {
    double k = tail_smallness_level(u, 4.0, sigma);
    if (prev >= 0.0) CHECK(k <= prev + 1e-15);
    prev = k;
  }
  CHECK_THROWS_AS(tail_smallness_level(u, 1.5, 1e-3), std::invalid_argument);
}

TEST_CASE("normalized L^p monotonicity underlying the cascade") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 48);
  std::mt19937_64 rng(81);
  std::normal_distribution<double> g;
  GridFunction u(mesh);
  for (int i = 0; i < u.size(); ++i) u[i] = g(rng);
  double measure = mesh->measure();
  double prev = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 5.0, 9.0, 20.0}) {
    double v = lp_norm(u, p) / std::pow(measure, 1.0 / p);
    CHECK(v >= prev - 1e-10);
    prev = v;
  }
}

TEST_CASE("sup bound cascade") {
  auto mesh = build_mesh(Domain::interval(0.0, 1.0, 0.25), 64);
  GridFunction zero(mesh);
  CascadeReport z = sup_bound_cascade(zero, 4.0, 1, 0.25);
  CHECK(z.bound == 0.0);
  CHECK(z.dominates);

  GridFunction one(mesh);
  for (int i = 0; i < one.size(); ++i) one[i] = 1.0;
  CascadeReport o = sup_bound_cascade(one, 4.0, 1, 0.25);
  CHECK(o.bound == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(o.dominates);

  auto mesh2 = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 64);
  GridFunction u = torsion_like(mesh2);
  CascadeReport c = sup_bound_cascade(u, 4.0, 1, 0.5);
  CHECK(c.dominates);
  CHECK(c.bound >= u.max_abs() * (1.0 - 1e-2));
  CHECK(c.bound <= 3.0 * u.max_abs());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fraclab/nonlinearity.hpp"
#include "fraclab/mesh.hpp"

using namespace fraclab;

namespace {
const Point kX{0.1, 0.0};
}

TEST_CASE("growth check: linear passes, cubic flags critical, exponential fails") {
  Domain dom = Domain::interval(-1.0, 1.0, 0.25);  // 2*_s = 4 in 1D at s = 1/4
  GrowthReport lin = growth_check(nl_linear(1.0), dom, 4000, 1);
  CHECK(lin.pass);
  CHECK(lin.subcritical);

  Nonlinearity cubic = nl_cubic(1.0);
  GrowthReport cub = growth_check(cubic, dom, 4000, 2);
  CHECK(cub.pass);
  CHECK(cub.critical);

  GrowthReport expo = growth_check(nl_exponential(), dom, 4000, 3);
  CHECK_FALSE(expo.pass);
  CHECK(expo.max_violation > 1.0);
  CHECK(expo.witness_t > 1.0);  // the witness lives at large t
}

TEST_CASE("every named nonlinearity has a consistent primitive") {
  Domain dom = Domain::interval(-1.0, 1.0, 0.5);
  for (const auto& nl : {nl_zero(), nl_constant(2.0), nl_linear(-1.5),
                         nl_linear_plus_constant(0.7, 0.3), nl_power(1.0, 1.5),
                         nl_arctan_plus(), nl_cubic(0.5), nl_cubic_soft(2.0, 1.0)}) {
    GrowthReport rep = growth_check(nl, dom, 2000, 4);
    CHECK(rep.primitive_mismatch <= 1e-3);
  }
}

TEST_CASE("level truncation: substitution, identity branch, bounded growth") {
  Nonlinearity cubic = nl_cubic(1.0);
  Nonlinearity f2 = truncate_nonlinearity_level(cubic, 2.0);
  CHECK(f2.f(kX, 5.0) == doctest::Approx(8.0));
  CHECK(f2.f(kX, -5.0) == doctest::Approx(-8.0));
  CHECK(f2.f(kX, 1.5) == doctest::Approx(cubic.f(kX, 1.5)));
  CHECK(f2.growth_q == 1.0);
  CHECK_THROWS_AS(truncate_nonlinearity_level(cubic, 0.0), std::invalid_argument);

  // primitive: F_k(t) = F(t_k) + f(k)(t-k) beyond the level
  CHECK(f2.F(kX, 3.0) == doctest::Approx(cubic.F(kX, 2.0) + 8.0 * 1.0));
  CHECK(f2.F(kX, -3.0) == doctest::Approx(cubic.F(kX, -2.0) + (-8.0) * (-1.0)));

  // F_k -> F pointwise as k grows
  for (double t : {0.5, -1.25, 3.0}) {
    double prev_err = 1e300;
    for (double k : {1.0, 2.0, 4.0, 8.0}) {
      double err = std::abs(truncate_nonlinearity_level(cubic, k).F(kX, t) - cubic.F(kX, t));
      CHECK(err <= prev_err + 1e-15);
      prev_err = err;
    }
    CHECK(prev_err == doctest::Approx(0.0));
  }
}

TEST_CASE("order truncation clamps into the interval and bounds the range") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 16);
  GridFunction lo(mesh), hi(mesh);
  for (int i = 0; i < lo.size(); ++i) {
    double x = mesh->nodes[i].x;
    lo[i] = -0.5 * (1.0 - x * x);
    hi[i] = 1.0 - x * x;
  }
  OrderedPair pair(lo, hi);
  Nonlinearity base = nl_cubic(1.0);
  Nonlinearity tilde = truncate_nonlinearity_order(base, pair);

  Point x{0.0, 0.0};
  // inside the interval the truncation is the identity
  CHECK(tilde.f(x, 0.3) == doctest::Approx(base.f(x, 0.3)));
  // above the upper branch the value freezes at f(upper)
  CHECK(tilde.f(x, 5.0) == doctest::Approx(base.f(x, 1.0)));
  CHECK(tilde.f(x, 9.0) == doctest::Approx(tilde.f(x, 5.0)));
  // below the lower branch
  CHECK(tilde.f(x, -5.0) == doctest::Approx(base.f(x, -0.5)));

  // |f_tilde| <= max(|f(lower)|, |f(upper)|) pointwise
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(-0.99, 0.99), ts(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    Point p{xs(rng), 0.0};
    double bound = std::max(std::abs(base.f(p, lo.eval(p))), std::abs(base.f(p, hi.eval(p))));
    CHECK(std::abs(tilde.f(p, ts(rng))) <= bound + 1e-12);
  }

  // monotone base keeps the truncation monotone in t
  Nonlinearity mono = truncate_nonlinearity_order(nl_arctan_plus(), pair);
  for (int i = 0; i < 200; ++i) {
    Point p{xs(rng), 0.0};
    double t1 = ts(rng), t2 = ts(rng);
    if (t1 > t2) std::swap(t1, t2);
    CHECK(mono.f(p, t1) <= mono.f(p, t2) + 1e-12);
  }

  // violated order is rejected
  GridFunction bad(mesh);
  for (int i = 0; i < bad.size(); ++i) bad[i] = 2.0;
  CHECK_THROWS_AS(OrderedPair(bad, lo), std::invalid_argument);
}

TEST_CASE("order truncation primitive matches numeric integration of the clamp") {
  auto mesh = build_mesh(Domain::interval(-1.0, 1.0, 0.5), 8);
  GridFunction lo(mesh), hi(mesh);
  for (int i = 0; i < lo.size(); ++i) {
    lo[i] = 0.2;  // interval not containing zero: exercises the saturated pieces
    hi[i] = 0.8;
  }
  for (int i = 0; i < lo.size(); ++i)
    if (!mesh->is_interior[i]) lo[i] = hi[i] = 0.0;
  OrderedPair pair(lo, hi);
  Nonlinearity tilde = truncate_nonlinearity_order(nl_cubic(1.0), pair);
  Point p{0.05, 0.0};
  for (double t : {-1.0, 0.1, 0.5, 2.5}) {
    const int nq = 20000;
    double acc = 0.0;
    for (int g = 0; g < nq; ++g) acc += tilde.f(p, t * (g + 0.5) / nq) * (t / nq);
    CHECK(tilde.F(p, t) == doctest::Approx(acc).epsilon(1e-4));
  }
}

TEST_CASE("sign truncations") {
  Nonlinearity base = nl_arctan_plus();
  Nonlinearity plus = truncate_nonlinearity_sign(base, SignBranch::plus);
  Nonlinearity minus = truncate_nonlinearity_sign(base, SignBranch::minus);
  CHECK(plus.f(kX, -2.0) == doctest::Approx(base.f(kX, 0.0)));
  CHECK(plus.f(kX, 2.0) == doctest::Approx(base.f(kX, 2.0)));
  CHECK(minus.f(kX, -2.0) == doctest::Approx(base.f(kX, -2.0)));
  CHECK(minus.f(kX, 2.0) == doctest::Approx(base.f(kX, 0.0)));

  // f(t) = t: f_-(t) = -t_-
  Nonlinearity lin_minus = truncate_nonlinearity_sign(nl_linear(1.0), SignBranch::minus);
  CHECK(lin_minus.f(kX, -3.0) == doctest::Approx(-3.0));
  CHECK(lin_minus.f(kX, 3.0) == doctest::Approx(0.0));

  // primitives stay consistent
  for (double t : {-2.0, -0.3, 0.4, 1.7}) {
    const int nq = 4000;
    double acc = 0.0;
    for (int g = 0; g < nq; ++g) acc += plus.f(kX, t * (g + 0.5) / nq) * (t / nq);
    CHECK(plus.F(kX, t) == doctest::Approx(acc).epsilon(1e-5));
  }
}

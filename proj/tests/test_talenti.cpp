#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fraclab/talenti.hpp"

using namespace fraclab;

TEST_CASE("bubble pointwise values") {
  CHECK(talenti_eval(1.0, {0.0, 0.0}, 1, 0.25, {0.0, 0.0}) == doctest::Approx(1.0));
  for (double eps : {0.3, 1.0, 2.5}) {
    Point z{0.4, 0.0};
    CHECK(talenti_eval(eps, z, 1, 0.25, z) ==
          doctest::Approx(std::pow(eps, -0.5 * (1.0 - 0.5))));
  }
  CHECK_THROWS_AS(talenti_eval(0.0, {0.0, 0.0}, 1, 0.25, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(talenti_eval(1.0, {0.0, 0.0}, 1, 0.75, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("full-space critical norm: closed form and scale invariance") {
  // N = 1, s = 1/4: T^{2*} = eps/(eps^2+x^2), integral = pi for every eps
  for (double eps : {0.5, 1.0, 2.0}) {
    double nrm = talenti_critical_norm(eps, 1, 0.25);
    CHECK(nrm == doctest::Approx(std::pow(M_PI, 0.25)).epsilon(1e-8));
  }
}

TEST_CASE("gamma fit: ratio constant across probes, matching the known constant") {
  GammaFitReport fit = talenti_fit_gamma(1.0, {0.0, 0.0}, 1, 0.25, 0.01);
  CHECK(fit.ratios.size() >= 5);
  CHECK(fit.constant_within_tol);
  CHECK(fit.relative_spread <= 0.01);
  // oracle: 2^{2s} Gamma((N+2s)/2) / Gamma((N-2s)/2) in the standard
  // normalization
  double expect = std::pow(2.0, 0.5) * std::tgamma(0.75) / std::tgamma(0.25);
  CHECK(fit.gamma == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("gamma fit is scale invariant in eps") {
  GammaFitReport a = talenti_fit_gamma(0.5, {0.0, 0.0}, 1, 0.25, 0.01);
  GammaFitReport b = talenti_fit_gamma(2.0, {0.0, 0.0}, 1, 0.25, 0.01);
  CHECK(a.gamma == doctest::Approx(b.gamma).epsilon(1e-3));
}

TEST_CASE("blowup table: exact sup law, bounded critical norm, diverging ratio") {
  Domain dom = Domain::interval(-1.0, 1.0, 0.25);
  std::vector<double> eps = {1.0, 0.5, 0.25, 0.125, 0.0625};
  auto rows = critical_blowup_demo(dom, 0.25, eps, {0.0, 0.0});
  REQUIRE(rows.size() == eps.size());
  double full = talenti_critical_norm(1.0, 1, 0.25);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].sup_norm == doctest::Approx(std::pow(eps[i], -0.25)).epsilon(1e-13));
    CHECK(rows[i].crit_norm_omega <= full * (1.0 + 1e-9));
    if (i) {
      // halving eps multiplies the sup norm by 2^{(N-2s)/2} exactly
      CHECK(rows[i].sup_norm / rows[i - 1].sup_norm ==
            doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-13));
      CHECK(rows[i].ratio > rows[i - 1].ratio);
      CHECK(rows[i].crit_norm_omega >= rows[i - 1].crit_norm_omega - 1e-9);
    }
  }
  CHECK_THROWS_AS(critical_blowup_demo(dom, 0.25, {0.0}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(critical_blowup_demo(dom, 0.25, eps, {5.0, 0.0}), std::invalid_argument);
}

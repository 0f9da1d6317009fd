#include "fraclab/talenti.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace fraclab {

double talenti_eval(double eps, const Point& z, int dimension, double s, const Point& x) {
  if (!(eps > 0.0)) throw std::invalid_argument("talenti_eval: eps must be positive");
  if (!(dimension > 2.0 * s))
    throw std::invalid_argument("talenti_eval: requires N > 2s");
  double r2 = (x.x - z.x) * (x.x - z.x) + (x.y - z.y) * (x.y - z.y);
  return std::pow(eps / (eps * eps + r2), 0.5 * (dimension - 2.0 * s));
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double radial_crit_integral(double eps, int dim, double s, double rmax) {
  // integral over r in (0, rmax) of T^{2*_s} surface-weighted
  const double twostar = 2.0 * dim / (dim - 2.0 * s);
  const double surface = dim == 1 ? 2.0 : 2.0 * M_PI;
  auto f = [&](double r) {
    double T = std::pow(eps / (eps * eps + r * r), 0.5 * (dim - 2.0 * s));
    return surface * (dim == 2 ? r : 1.0) * std::pow(T, twostar);
  };
  return GK::integrate(f, 0.0, rmax, 12, 1e-12);
}

}  // namespace

double talenti_critical_norm(double eps, int dimension, double s) {
  const double twostar = 2.0 * dimension / (dimension - 2.0 * s);
  // T^{2*} decays like r^{-2N}: substitute t = 1/r beyond a finite radius
  double inner = radial_crit_integral(eps, dimension, s, 10.0 * (1.0 + eps));
  const double surface = dimension == 1 ? 2.0 : 2.0 * M_PI;
  auto far = [&](double t) {
    if (t <= 0.0) return 0.0;
    double r = 1.0 / t;
    double T = std::pow(eps / (eps * eps + r * r), 0.5 * (dimension - 2.0 * s));
    return surface * (dimension == 2 ? r : 1.0) * std::pow(T, twostar) * r * r;
  };
  double outer = GK::integrate(far, 0.0, 1.0 / (10.0 * (1.0 + eps)), 12, 1e-12);
  return std::pow(inner + outer, 1.0 / twostar);
}

double talenti_critical_norm_on(const Domain& domain, double eps, const Point& z) {
  const int dim = domain.dimension();
  const double s = domain.order();
  const double twostar = 2.0 * dim / (dim - 2.0 * s);
  if (dim == 1) {
    auto f = [&](double x) {
      return std::pow(talenti_eval(eps, z, dim, s, {x, 0.0}), twostar);
    };
    double v = GK::integrate(f, domain.left(), domain.right(), 12, 1e-12);
    return std::pow(v, 1.0 / twostar);
  }
  // disk: polar quadrature around the center
  const Point c = domain.center();
  const double R = domain.radius();
  const int nth = 128;
  auto f = [&](double r) {
    double acc = 0.0;
    for (int k = 0; k < nth; ++k) {
      double th = 2.0 * M_PI * (k + 0.5) / nth;
      Point x{c.x + r * std::cos(th), c.y + r * std::sin(th)};
      acc += std::pow(talenti_eval(eps, z, dim, s, x), twostar);
    }
    return acc * (2.0 * M_PI / nth) * r;
  };
  double v = GK::integrate(f, 0.0, R, 12, 1e-10);
  return std::pow(v, 1.0 / twostar);
}

GammaFitReport talenti_fit_gamma(double eps, const Point& z, int dimension, double s, double tol) {
  GammaFitReport rep;
  const double p = (dimension + 2.0 * s) / (dimension - 2.0 * s);
  KernelSpec kernel = KernelSpec::standard(dimension, s);
  std::vector<Point> probes;
  const double offs[] = {0.0, 0.3, -0.45, 0.8, 1.5, -2.2};
  for (double o : offs) probes.push_back({z.x + o * eps, z.y});
  auto T = [&](const Point& x) { return talenti_eval(eps, z, dimension, s, x); };
  for (const auto& x : probes) {
    FlapResult fl = pointwise_flap(T, x, kernel, 1e-6);
    double ratio = fl.value / std::pow(T(x), p);
    rep.probes.push_back(x);
    rep.ratios.push_back(ratio);
  }
  double mn = *std::min_element(rep.ratios.begin(), rep.ratios.end());
  double mx = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  double mid = 0.5 * (mn + mx);
  rep.gamma = mid;
  rep.relative_spread = (mx - mn) / std::abs(mid);
  rep.constant_within_tol = rep.relative_spread <= tol;
  if (!rep.constant_within_tol)
    throw std::runtime_error("talenti_fit_gamma: ratio not constant across probes (spread " +
                             std::to_string(rep.relative_spread) + ")");
  return rep;
}

std::vector<BlowupRow> critical_blowup_demo(const Domain& domain, double s,
                                            const std::vector<double>& eps_sequence,
                                            const Point& z) {
  if (!domain.contains_closure(z))
    throw std::invalid_argument("critical_blowup_demo: center must lie in the domain");
  const int dim = domain.dimension();
  std::vector<BlowupRow> rows;
  for (double eps : eps_sequence) {
    if (!(eps > 0.0)) throw std::invalid_argument("critical_blowup_demo: eps must be positive");
    BlowupRow row;
    row.eps = eps;
    row.sup_norm = std::pow(eps, -0.5 * (dim - 2.0 * s));
    row.crit_norm_omega = talenti_critical_norm_on(domain, eps, z);
    row.ratio = row.sup_norm / row.crit_norm_omega;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fraclab

#include "fraclab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fraclab/norms.hpp"

namespace fraclab {

double elementary_inequality_gap(double a, double b, double r, double k) {
  if (!(r >= 2.0)) throw std::invalid_argument("elementary_inequality_gap: requires r >= 2");
  if (!(k > 0.0)) throw std::invalid_argument("elementary_inequality_gap: requires k > 0");
  const long double al = a, bl = b, rl = r, kl = k;
  auto tk = [&](long double t) { return std::min(std::abs(t), kl); };
  const long double ga = al * std::pow(tk(al), rl - 2.0L);
  const long double gb = bl * std::pow(tk(bl), rl - 2.0L);
  const long double ha = al * std::pow(tk(al), rl / 2.0L - 1.0L);
  const long double hb = bl * std::pow(tk(bl), rl / 2.0L - 1.0L);
  const long double lhs = (al - bl) * (ga - gb);
  const long double rhs = 4.0L * (rl - 1.0L) / (rl * rl) * (ha - hb) * (ha - hb);
  return static_cast<double>(lhs - rhs);
}

MoserLadder moser_ladder(double q, int dimension, double s, double mu, int n_max) {
  double twostar = critical_exponent(dimension, s);
  if (!std::isfinite(twostar))
    throw std::invalid_argument("moser_ladder: requires N > 2s (finite critical exponent)");
  MoserLadder L;
  L.gamma_sq = 0.5 * twostar;
  L.gamma = std::sqrt(L.gamma_sq);
  L.mu0 = (q - 2.0) / (L.gamma_sq - 1.0);
  L.start_mu = mu;
  L.exponents.reserve(n_max + 1);
  if (std::abs(mu - L.mu0) < 1e-15 * std::max(1.0, std::abs(L.mu0))) {
    // exact fixed point
    L.exponents.assign(n_max + 1, L.mu0);
    L.diverges = false;
    return L;
  }
  double r = mu;
  for (int n = 0; n <= n_max; ++n) {
    L.exponents.push_back(r);
    r = L.gamma_sq * r + 2.0 - q;
  }
  L.diverges = mu > L.mu0;
  return L;
}

double moser_subcritical_start(double q, int dimension, double s) {
  double twostar = critical_exponent(dimension, s);
  if (!std::isfinite(twostar))
    throw std::invalid_argument("moser_subcritical_start: requires N > 2s");
  return twostar + 2.0 - q;
}

double moser_critical_start(double q) { return 0.5 * q * (q + 1.0) + 2.0 - q; }

namespace {

// integral over {|u_h| > K} of |u_h|^q by the element rule
double superlevel_integral(const GridFunction& u, double q, double K) {
  const Mesh& mesh = u.mesh();
  double acc = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    ElementQuadrature quad = element_quadrature(mesh, e);
    for (size_t g = 0; g < quad.points.size(); ++g) {
      double v = std::abs(u.eval_on_element(e, quad.points[g]));
      if (v > K) acc += quad.weights[g] * std::pow(v, q);
    }
  }
  return acc;
}

}  // namespace

double tail_smallness_level(const GridFunction& u, double q, double sigma) {
  if (!(q > 2.0)) throw std::invalid_argument("tail_smallness_level: requires q > 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("tail_smallness_level: requires sigma > 0");
  auto ok = [&](double K) {
    double I = superlevel_integral(u, q, K);
    return std::pow(I, 1.0 - 2.0 / q) <= sigma;
  };
  if (ok(0.0)) return 0.0;
  std::vector<double> levels;
  levels.reserve(u.size());
  for (int i = 0; i < u.size(); ++i) levels.push_back(std::abs(u[i]));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  // smallest nodal level that works (binary search over the sorted values)
  int lo = 0, hi = static_cast<int>(levels.size()) - 1;
  if (!ok(levels[hi])) return levels[hi];  // max |u|: empty superlevel set
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (ok(levels[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return levels[lo];
}

CascadeReport sup_bound_cascade(const GridFunction& u, double q, int dimension, double s) {
  (void)q;
  CascadeReport rep;
  rep.sup_norm = u.max_abs();
  if (rep.sup_norm == 0.0) {
    rep.bound = 0.0;
    rep.dominates = true;
    return rep;
  }
  double twostar = critical_exponent(dimension, s);
  // N <= 2s embeds into every L^p; exponent doubling is the conventional ladder
  double gamma = std::isfinite(twostar) ? std::sqrt(0.5 * twostar) : std::sqrt(2.0);

  // rungs gamma^n starting from the first exponent >= 2, up to 10^3
  int n0 = static_cast<int>(std::ceil(std::log(2.0) / std::log(gamma)));
  std::vector<int> ns;
  for (int n = n0; std::pow(gamma, n) <= 1e3; ++n) ns.push_back(n);
  if (ns.empty() || ns.size() < 2) ns = {n0, n0 + 1};
  for (int n : ns) {
    double p = std::pow(gamma, n);
    double nrm = lp_norm(u, p);
    if (!std::isfinite(nrm))
      throw std::runtime_error("sup_bound_cascade: non-finite norm at rung n = " +
                               std::to_string(n));
    rep.exponents.push_back(p);
    rep.norms.push_back(nrm);
  }
  // smallest H >= 1 validating ||u/H||_{gamma^{n+1}} <= ||u/H||_{gamma^n}^{1-gamma^{1-n}}
  double logH = 0.0;
  for (size_t i = 0; i + 1 < ns.size(); ++i) {
    double theta = std::pow(gamma, 1.0 - ns[i]);  // gamma^{1-n}
    double need = (std::log(rep.norms[i + 1]) - (1.0 - theta) * std::log(rep.norms[i])) / theta;
    logH = std::max(logH, need);
  }
  rep.h_scale = std::exp(logH);
  double vmax = 0.0;
  for (double nrm : rep.norms) vmax = std::max(vmax, nrm / rep.h_scale);
  rep.bound = rep.h_scale * vmax;
  rep.dominates = rep.bound >= rep.sup_norm * (1.0 - 1e-2);
  return rep;
}

}  // namespace fraclab

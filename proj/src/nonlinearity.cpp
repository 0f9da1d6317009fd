#include "fraclab/nonlinearity.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fraclab {

double Nonlinearity::dfdt(const Point& x, double t) const {
  if (df_dt) return df_dt(x, t);
  const double h = 1e-6 * (1.0 + std::abs(t));
  return (f(x, t + h) - f(x, t - h)) / (2.0 * h);
}

Nonlinearity nl_zero() {
  Nonlinearity nl;
  nl.name = "zero";
  nl.f = [](const Point&, double) { return 0.0; };
  nl.F = [](const Point&, double) { return 0.0; };
  nl.df_dt = [](const Point&, double) { return 0.0; };
  nl.growth_a = 1e-300;
  nl.growth_q = 1.0;
  nl.monotone = true;
  nl.sign_tf_nonneg = true;
  return nl;
}

Nonlinearity nl_constant(double c) {
  Nonlinearity nl;
  nl.name = "constant";
  nl.f = [c](const Point&, double) { return c; };
  nl.F = [c](const Point&, double t) { return c * t; };
  nl.df_dt = [](const Point&, double) { return 0.0; };
  nl.growth_a = std::abs(c) + 1e-12;
  nl.growth_q = 1.0;
  nl.monotone = true;
  return nl;
}

Nonlinearity nl_linear(double lambda) {
  Nonlinearity nl;
  nl.name = "linear";
  nl.f = [lambda](const Point&, double t) { return lambda * t; };
  nl.F = [lambda](const Point&, double t) { return 0.5 * lambda * t * t; };
  nl.df_dt = [lambda](const Point&, double) { return lambda; };
  nl.growth_a = std::abs(lambda) + 1e-12;
  nl.growth_q = 2.0;
  nl.monotone = lambda >= 0.0;
  nl.sign_tf_nonneg = lambda >= 0.0;
  return nl;
}

Nonlinearity nl_linear_plus_constant(double lambda, double c) {
  Nonlinearity nl;
  nl.name = "linear_plus_constant";
  nl.f = [lambda, c](const Point&, double t) { return lambda * t + c; };
  nl.F = [lambda, c](const Point&, double t) { return 0.5 * lambda * t * t + c * t; };
  nl.df_dt = [lambda](const Point&, double) { return lambda; };
  nl.growth_a = std::abs(lambda) + std::abs(c) + 1e-12;
  nl.growth_q = 2.0;
  nl.monotone = lambda >= 0.0;
  return nl;
}

Nonlinearity nl_power(double b, double r) {
  if (!(r > 1.0)) throw std::invalid_argument("nl_power: exponent r must exceed 1");
  Nonlinearity nl;
  nl.name = "power";
  nl.f = [b, r](const Point&, double t) {
    // sgn(t) |t|^{r-1}; the product form would produce inf * 0 at t = 0
    return t == 0.0 ? 0.0 : b * std::pow(std::abs(t), r - 2.0) * t;
  };
  nl.F = [b, r](const Point&, double t) { return b * std::pow(std::abs(t), r) / r; };
  if (r >= 2.0) {
    nl.df_dt = [b, r](const Point&, double t) {
      return b * (r - 1.0) * std::pow(std::abs(t), r - 2.0);
    };
  }  // for r < 2 the derivative blows up at 0; finite differences stand in
  nl.growth_a = std::abs(b) + 1e-12;
  nl.growth_q = r;
  nl.monotone = b >= 0.0;
  nl.sign_tf_nonneg = b >= 0.0;
  return nl;
}

Nonlinearity nl_arctan_plus() {
  Nonlinearity nl;
  nl.name = "arctan_plus";
  nl.f = [](const Point&, double t) { return std::atan(t) + 1.0; };
  nl.F = [](const Point&, double t) {
    return t * std::atan(t) - 0.5 * std::log1p(t * t) + t;
  };
  nl.df_dt = [](const Point&, double t) { return 1.0 / (1.0 + t * t); };
  nl.growth_a = M_PI_2 + 1.0;
  nl.growth_q = 1.0;
  nl.monotone = true;
  return nl;
}

Nonlinearity nl_cubic(double b) {
  Nonlinearity nl = nl_power(b, 4.0);
  nl.name = "cubic";
  return nl;
}

Nonlinearity nl_cubic_soft(double lambda, double b) {
  Nonlinearity nl;
  nl.name = "cubic_soft";
  nl.f = [lambda, b](const Point&, double t) { return lambda * t - b * t * t * t; };
  nl.F = [lambda, b](const Point&, double t) {
    return 0.5 * lambda * t * t - 0.25 * b * t * t * t * t;
  };
  nl.df_dt = [lambda, b](const Point&, double t) { return lambda - 3.0 * b * t * t; };
  nl.growth_a = std::abs(lambda) + std::abs(b) + 1e-12;
  nl.growth_q = 4.0;
  return nl;
}

Nonlinearity nl_exponential() {
  Nonlinearity nl;
  nl.name = "exponential";
  nl.f = [](const Point&, double t) { return std::exp(t); };
  nl.F = [](const Point&, double t) { return std::exp(t) - 1.0; };
  nl.df_dt = [](const Point&, double t) { return std::exp(t); };
  nl.growth_a = 1.0;
  nl.growth_q = 2.0;
  nl.monotone = true;
  return nl;
}

GrowthReport growth_check(const Nonlinearity& nl, const Domain& domain, int sample_count,
                          unsigned seed) {
  GrowthReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> decade(-3.0, 3.0);

  auto sample_x = [&]() -> Point {
    if (domain.kind() == Domain::Kind::interval)
      return {domain.left() + unit(rng) * (domain.right() - domain.left()), 0.0};
    double rr = domain.radius() * std::sqrt(unit(rng));
    double th = 2.0 * M_PI * unit(rng);
    return {domain.center().x + rr * std::cos(th), domain.center().y + rr * std::sin(th)};
  };

  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < sample_count; ++i) {
    Point x = sample_x();
    double t = std::pow(10.0, decade(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    double bound = nl.growth_a * (1.0 + std::pow(std::abs(t), nl.growth_q - 1.0));
    double viol = std::abs(nl.f(x, t)) - bound;
    if (viol > rep.max_violation) {
      rep.max_violation = viol;
      rep.witness_x = x;
      rep.witness_t = t;
    }
    // primitive consistency on moderate t (16-point midpoint quadrature)
    if (i % 16 == 0 && std::abs(t) <= 10.0) {
      const int nq = 64;
      double acc = 0.0;
      for (int g = 0; g < nq; ++g) acc += nl.f(x, t * (g + 0.5) / nq) * (t / nq);
      rep.primitive_mismatch =
          std::max(rep.primitive_mismatch,
                   std::abs(acc - nl.F(x, t)) / (1.0 + std::abs(nl.F(x, t))));
    }
  }
  rep.pass = rep.max_violation <= 1e-9 * nl.growth_a;
  double twostar = critical_exponent(domain.dimension(), domain.order());
  rep.critical = std::isfinite(twostar) && std::abs(nl.growth_q - twostar) < 1e-12;
  rep.subcritical = nl.growth_q < twostar && !rep.critical;
  return rep;
}

Nonlinearity truncate_nonlinearity_level(const Nonlinearity& nl, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("truncate_nonlinearity_level: k must be positive");
  Nonlinearity out;
  out.name = nl.name + "_trunc";
  auto f = nl.f;
  auto F = nl.F;
  out.f = [f, k](const Point& x, double t) { return f(x, truncate(t, k)); };
  out.F = [f, F, k](const Point& x, double t) {
    double tk = truncate(t, k);
    double base = F(x, tk);
    if (t > k) base += f(x, k) * (t - k);
    if (t < -k) base += f(x, -k) * (t + k);
    return base;
  };
  if (nl.df_dt) {
    auto d = nl.df_dt;
    out.df_dt = [d, k](const Point& x, double t) {
      return std::abs(t) < k ? d(x, t) : 0.0;
    };
  }
  out.growth_a = nl.growth_a * (1.0 + std::pow(k, nl.growth_q - 1.0));
  out.growth_q = 1.0;
  out.monotone = nl.monotone;
  out.sign_tf_nonneg = nl.sign_tf_nonneg;
  out.autonomous = nl.autonomous;
  return out;
}

OrderedPair::OrderedPair(GridFunction lo, GridFunction up) {
  if (lo.mesh_ptr().get() != up.mesh_ptr().get())
    throw std::invalid_argument("OrderedPair: lower and upper live on different meshes");
  for (int i = 0; i < lo.size(); ++i)
    if (lo[i] > up[i] + 1e-12 * (1.0 + up.max_abs()))
      throw std::invalid_argument("OrderedPair: lower exceeds upper at node " + std::to_string(i));
  lower = std::make_shared<GridFunction>(std::move(lo));
  upper = std::make_shared<GridFunction>(std::move(up));
}

Nonlinearity truncate_nonlinearity_order(const Nonlinearity& nl, const OrderedPair& pair) {
  Nonlinearity out;
  out.name = nl.name + "_order";
  auto f = nl.f;
  auto F = nl.F;
  auto lo = pair.lower;
  auto up = pair.upper;
  auto clampx = [lo, up](const Point& x, double t) {
    return std::clamp(t, lo->eval(x), up->eval(x));
  };
  out.f = [f, clampx](const Point& x, double t) { return f(x, clampx(x, t)); };
  // primitive of the clamped integrand, saturated pieces integrated exactly
  out.F = [f, F, lo, up](const Point& x, double t) {
    double a = lo->eval(x), b = up->eval(x);
    double c0 = std::clamp(0.0, a, b), ct = std::clamp(t, a, b);
    double val = F(x, ct) - F(x, c0);
    val += f(x, a) * (std::min(t, a) - std::min(0.0, a));
    val += f(x, b) * (std::max(t, b) - std::max(0.0, b));
    return val;
  };
  out.df_dt = {};  // kinked; finite differences are the honest derivative
  out.growth_a = nl.growth_a *
                 (1.0 + std::pow(std::max(lo->max_abs(), up->max_abs()), nl.growth_q - 1.0));
  out.growth_q = 1.0;
  out.monotone = nl.monotone;
  out.autonomous = false;
  return out;
}

Nonlinearity truncate_nonlinearity_sign(const Nonlinearity& nl, SignBranch branch) {
  Nonlinearity out;
  auto f = nl.f;
  auto F = nl.F;
  if (branch == SignBranch::plus) {
    out.name = nl.name + "_plus";
    out.f = [f](const Point& x, double t) { return f(x, std::max(t, 0.0)); };
    out.F = [f, F](const Point& x, double t) {
      return t >= 0.0 ? F(x, t) : f(x, 0.0) * t;
    };
  } else {
    out.name = nl.name + "_minus";
    out.f = [f](const Point& x, double t) { return f(x, std::min(t, 0.0)); };
    out.F = [f, F](const Point& x, double t) {
      return t <= 0.0 ? F(x, t) : f(x, 0.0) * t;
    };
  }
  out.growth_a = nl.growth_a;
  out.growth_q = nl.growth_q;
  out.monotone = nl.monotone;
  out.autonomous = nl.autonomous;
  return out;
}

}  // namespace fraclab

#include "fraclab/geometry.hpp"

#include <limits>

namespace fraclab {

Domain Domain::interval(double a, double b, double s) {
  if (!(a < b)) throw std::invalid_argument("Domain::interval: requires a < b");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("Domain: s must lie in (0,1)");
  Domain d(Kind::interval, s);
  d.a_ = a;
  d.b_ = b;
  return d;
}

Domain Domain::disk(Point center, double radius, double s) {
  if (!(radius > 0.0)) throw std::invalid_argument("Domain::disk: requires radius > 0");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("Domain: s must lie in (0,1)");
  Domain d(Kind::disk, s);
  d.center_ = center;
  d.radius_ = radius;
  return d;
}

double Domain::left() const {
  if (kind_ != Kind::interval) throw std::logic_error("Domain::left: not an interval");
  return a_;
}

double Domain::right() const {
  if (kind_ != Kind::interval) throw std::logic_error("Domain::right: not an interval");
  return b_;
}

Point Domain::center() const {
  if (kind_ != Kind::disk) throw std::logic_error("Domain::center: not a disk");
  return center_;
}

double Domain::radius() const {
  if (kind_ != Kind::disk) throw std::logic_error("Domain::radius: not a disk");
  return radius_;
}

double Domain::measure() const {
  if (kind_ == Kind::interval) return b_ - a_;
  return M_PI * radius_ * radius_;
}

bool Domain::contains_closure(const Point& p, double tol) const {
  if (kind_ == Kind::interval) return p.x >= a_ - tol && p.x <= b_ + tol;
  return distance(p, center_) <= radius_ + tol;
}

double boundary_distance(const Domain& dom, const Point& x) {
  if (!dom.contains_closure(x))
    throw std::invalid_argument("boundary_distance: point outside the closed domain");
  double d = 0.0;
  if (dom.kind() == Domain::Kind::interval)
    d = std::min(x.x - dom.left(), dom.right() - x.x);
  else
    d = dom.radius() - distance(x, dom.center());
  return std::max(d, 0.0);
}

double critical_exponent(int dimension, double s) {
  if (dimension <= 0) throw std::invalid_argument("critical_exponent: dimension must be positive");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("critical_exponent: s must lie in (0,1)");
  if (dimension <= 2.0 * s) return std::numeric_limits<double>::infinity();
  return 2.0 * dimension / (dimension - 2.0 * s);
}

}  // namespace fraclab

#pragma once

#include <cmath>
#include <stdexcept>

namespace fraclab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Bounded C^{1,1} domain (open interval in 1D, disk in 2D) together with
/// the fractional order s of the problem posed on it.
class Domain {
public:
  enum class Kind { interval, disk };

  static Domain interval(double a, double b, double s);
  static Domain disk(Point center, double radius, double s);

  Kind kind() const { return kind_; }
  int dimension() const { return kind_ == Kind::interval ? 1 : 2; }
  double order() const { return s_; }

  double left() const;
  double right() const;
  Point center() const;
  double radius() const;

  /// Lebesgue measure of the domain.
  double measure() const;

  /// True if p lies in the closed domain (up to tol).
  bool contains_closure(const Point& p, double tol = 1e-12) const;

private:
  Domain(Kind kind, double s) : kind_(kind), s_(s) {}

  Kind kind_;
  double s_;
  double a_ = 0.0, b_ = 0.0;
  Point center_{};
  double radius_ = 0.0;
};

/// Distance from x to the complement of the domain; zero on the boundary.
/// Throws if x lies outside the closed domain.
double boundary_distance(const Domain& dom, const Point& x);

inline double boundary_distance(const Domain& dom, double x) {
  return boundary_distance(dom, Point{x, 0.0});
}

/// Fractional critical exponent 2N/(N-2s). Returns +infinity when N <= 2s
/// (the embedding then holds for every finite exponent).
double critical_exponent(int dimension, double s);

}  // namespace fraclab

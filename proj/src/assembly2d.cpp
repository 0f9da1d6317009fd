// Assembly of the nonlocal pair integrals on disk triangulations.
//
// The domain x domain part is assembled element-pair by element-pair:
//   identical pair    exact reduction via the triangle covariogram
//                     area(T cap (T+e)) = |T| (1 - rho/rhomax(w))^2,
//   touching pairs    relative coordinates e = x - y; for each direction the
//                     inner integral over T cap (T'+e) of the quadratic
//                     integrand is exact (polygon moments), the radial
//                     integral is regularized by rho = rhomax * tau^{1/(3-2s)},
//   disjoint pairs    tensor Gauss rules with subdivision for close pairs.
// The complement contribution enters as 2 * int phi_i phi_j w(x) dx with the
// radial outer-mass weight w, graded toward the boundary where w blows up
// like dist^{-2s}.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <thread>
#include <vector>

#include "fraclab/stiffness_form.hpp"

namespace fraclab {

namespace {

struct Vec2 {
  double x = 0.0, y = 0.0;
};
inline Vec2 operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

struct TriGeom {
  Point v[3];
  int node[3];
  double area = 0.0;
  double diam = 0.0;
  Vec2 g[3];     // gradient of local basis a
  double c[3];   // offset: phi_a(x) = g[a].x + c[a]
};

TriGeom make_tri(const Mesh& mesh, int e) {
  const Element& el = mesh.elements[e];
  TriGeom t;
  for (int a = 0; a < 3; ++a) {
    t.v[a] = mesh.nodes[el.v[a]];
    t.node[a] = el.v[a];
  }
  double sa = 0.5 * cross(t.v[1] - t.v[0], t.v[2] - t.v[0]);
  if (sa < 0.0) {  // normalize to counterclockwise
    std::swap(t.v[1], t.v[2]);
    std::swap(t.node[1], t.node[2]);
    sa = -sa;
  }
  t.area = sa;
  t.diam = std::max({distance(t.v[0], t.v[1]), distance(t.v[1], t.v[2]), distance(t.v[0], t.v[2])});
  Eigen::Matrix3d V;
  for (int a = 0; a < 3; ++a) V.row(a) << t.v[a].x, t.v[a].y, 1.0;
  Eigen::Matrix3d C = V.inverse();
  for (int a = 0; a < 3; ++a) {
    t.g[a] = {C(0, a), C(1, a)};
    t.c[a] = C(2, a);
  }
  return t;
}

// Gauss-Legendre nodes/weights on [0,1], cached per order.
const std::vector<std::pair<double, double>>& gauss01(int n) {
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<double, double>> pts(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));  // initial guess on [-1,1]
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    pts[n - 1 - i] = {0.5 * (x + 1.0), 1.0 / ((1.0 - x * x) * dp * dp)};
  }
  return cache.emplace(n, std::move(pts)).first->second;
}

// Dunavant 6-point degree-4 triangle rule (barycentric, weights sum to 1).
struct TriRulePoint {
  double l1, l2, w;
};
const std::array<TriRulePoint, 6>& tri_rule6() {
  static const std::array<TriRulePoint, 6> r = {{
      {0.108103018168070, 0.445948490915965, 0.223381589678011},
      {0.445948490915965, 0.108103018168070, 0.223381589678011},
      {0.445948490915965, 0.445948490915965, 0.223381589678011},
      {0.816847572980459, 0.091576213509771, 0.109951743655322},
      {0.091576213509771, 0.816847572980459, 0.109951743655322},
      {0.091576213509771, 0.091576213509771, 0.109951743655322},
  }};
  return r;
}

Point bary_point(const Point& a, const Point& b, const Point& c, double l1, double l2) {
  double l0 = 1.0 - l1 - l2;
  return {l0 * a.x + l1 * b.x + l2 * c.x, l0 * a.y + l1 * b.y + l2 * c.y};
}

// ---- convex geometry helpers -------------------------------------------

// Monotone-chain convex hull (counterclockwise, no repeated last point).
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) {
                          return std::abs(a.x - b.x) < 1e-15 && std::abs(a.y - b.y) < 1e-15;
                        }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n < 3) return pts;
  std::vector<Point> h(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Exit distance of the ray t*dir (t >= 0) from a counterclockwise convex
// polygon containing the origin on its boundary or interior.
double ray_exit(const std::vector<Point>& hull, double wx, double wy) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(hull.size());
  for (int i = 0; i < n; ++i) {
    const Point &a = hull[i], &b = hull[(i + 1) % n];
    double nx = b.y - a.y, ny = -(b.x - a.x);  // outward normal of a CCW edge
    double denom = nx * wx + ny * wy;
    if (denom > 1e-14) {
      double d = nx * a.x + ny * a.y;
      best = std::min(best, std::max(d, 0.0) / denom);
    }
  }
  return std::isfinite(best) ? best : 0.0;
}

// Sutherland-Hodgman clip of polygon `poly` by the CCW triangle (t0,t1,t2).
void clip_by_triangle(std::vector<Point>& poly, const Point& t0, const Point& t1, const Point& t2,
                      std::vector<Point>& scratch) {
  const Point tri[3] = {t0, t1, t2};
  for (int e = 0; e < 3 && !poly.empty(); ++e) {
    const Point &a = tri[e], &b = tri[(e + 1) % 3];
    const double ex = b.x - a.x, ey = b.y - a.y;
    scratch.clear();
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
      const Point &p = poly[i], &q = poly[(i + 1) % n];
      double sp = ex * (p.y - a.y) - ey * (p.x - a.x);
      double sq = ex * (q.y - a.y) - ey * (q.x - a.x);
      bool inp = sp >= 0.0, inq = sq >= 0.0;
      if (inp) scratch.push_back(p);
      if (inp != inq) {
        double t = sp / (sp - sq);
        scratch.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
    poly.swap(scratch);
  }
}

struct PolyMoments {
  double m00 = 0, m10 = 0, m01 = 0, m20 = 0, m11 = 0, m02 = 0;
};

PolyMoments polygon_moments(const std::vector<Point>& p) {
  PolyMoments m;
  const int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i) {
    const Point &a = p[i], &b = p[(i + 1) % n];
    double ci = a.x * b.y - b.x * a.y;
    m.m00 += ci;
    m.m10 += ci * (a.x + b.x);
    m.m01 += ci * (a.y + b.y);
    m.m20 += ci * (a.x * a.x + a.x * b.x + b.x * b.x);
    m.m11 += ci * (2.0 * a.x * a.y + a.x * b.y + b.x * a.y + 2.0 * b.x * b.y);
    m.m02 += ci * (a.y * a.y + a.y * b.y + b.y * b.y);
  }
  m.m00 /= 2.0;
  m.m10 /= 6.0;
  m.m01 /= 6.0;
  m.m20 /= 12.0;
  m.m11 /= 24.0;
  m.m02 /= 12.0;
  return m;
}

// ---- pair integrals ------------------------------------------------------

// Basis bookkeeping for a pair of triangles: the union of the involved
// global hats, with the affine representation of each on T and on T'.
struct PairBasis {
  std::vector<int> slot;  // output index of each basis entry
  std::vector<Vec2> gT, gP;
  std::vector<double> cT, cP;
  int size() const { return static_cast<int>(slot.size()); }

  void add(int out_slot, const TriGeom& T, const TriGeom& P, int node) {
    for (int s : slot)
      if (s == out_slot) return;
    slot.push_back(out_slot);
    Vec2 gt{0, 0}, gp{0, 0};
    double ct = 0, cp = 0;
    for (int a = 0; a < 3; ++a) {
      if (T.node[a] == node) {
        gt = T.g[a];
        ct = T.c[a];
      }
      if (P.node[a] == node) {
        gp = P.g[a];
        cp = P.c[a];
      }
    }
    gT.push_back(gt);
    gP.push_back(gp);
    cT.push_back(ct);
    cP.push_back(cp);
  }
};

PairBasis make_pair_basis(const Mesh& mesh, const TriGeom& T, const TriGeom& P) {
  PairBasis pb;
  for (int a = 0; a < 3; ++a)
    if (mesh.interior_index[T.node[a]] >= 0)
      pb.add(mesh.interior_index[T.node[a]], T, P, T.node[a]);
  for (int a = 0; a < 3; ++a)
    if (mesh.interior_index[P.node[a]] >= 0)
      pb.add(mesh.interior_index[P.node[a]], T, P, P.node[a]);
  return pb;
}

// Identical pair, exact covariogram reduction: the intersection of a
// triangle with its translate is a similar triangle, so the radial moment
// integrates in closed form against |T| (1 - rho/rhomax)^2.
void self_pair_core(const TriGeom& T, double s, double acc[3][3]) {
  std::vector<Point> diff;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) diff.push_back({T.v[i].x - T.v[j].x, T.v[i].y - T.v[j].y});
  std::vector<Point> hull = convex_hull(diff);
  std::vector<double> angles;
  for (const auto& p : hull) angles.push_back(std::atan2(p.y, p.x));
  std::sort(angles.begin(), angles.end());
  const double cs = 1.0 / (2.0 - 2.0 * s) - 2.0 / (3.0 - 2.0 * s) + 1.0 / (4.0 - 2.0 * s);
  const auto& gl = gauss01(16);

  const int ns = static_cast<int>(angles.size());
  for (int k = 0; k < ns; ++k) {
    double th0 = angles[k];
    double th1 = (k + 1 < ns) ? angles[k + 1] : angles[0] + 2.0 * M_PI;
    if (th1 - th0 < 1e-14) continue;
    for (const auto& [t, w] : gl) {
      double th = th0 + t * (th1 - th0);
      double wx = std::cos(th), wy = std::sin(th);
      double rmax = ray_exit(hull, wx, wy);
      double f = w * (th1 - th0) * std::pow(rmax, 2.0 - 2.0 * s) * T.area * cs;
      for (int a = 0; a < 3; ++a) {
        double da = T.g[a].x * wx + T.g[a].y * wy;
        for (int b = a; b < 3; ++b) {
          double db = T.g[b].x * wx + T.g[b].y * wy;
          acc[a][b] += f * da * db;
        }
      }
    }
  }
}

void self_pair(const Mesh& mesh, const TriGeom& T, double s, Eigen::MatrixXd& A) {
  double acc[3][3] = {};
  self_pair_core(T, s, acc);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      int ia = mesh.interior_index[T.node[a]], ib = mesh.interior_index[T.node[b]];
      if (ia < 0 || ib < 0) continue;
      A(ia, ib) += acc[a][b];
      if (a != b) A(ib, ia) += acc[a][b];
    }
}

// Edge- or vertex-touching pair: polar relative coordinates. Fills the
// nb x nb accumulator indexed by basis entry.
void touching_pair_core(const TriGeom& T, const TriGeom& P, double s, const PairBasis& pb,
                        std::vector<double>& acc) {
  const int nb = pb.size();
  std::vector<Point> diff;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      diff.push_back({T.v[i].x - P.v[j].x, T.v[i].y - P.v[j].y});
  std::vector<Point> hull = convex_hull(diff);
  if (hull.size() < 3) return;
  std::vector<double> angles;
  for (const auto& p : hull)
    if (std::hypot(p.x, p.y) > 1e-14) angles.push_back(std::atan2(p.y, p.x));
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               angles.end());

  const double m_exp = 1.0 / (3.0 - 2.0 * s);
  const auto& gl_ang = gauss01(8);
  const auto& gl_rad = gauss01(12);

  std::vector<double> ka_x(nb), ka_y(nb);
  for (int a = 0; a < nb; ++a) {
    ka_x[a] = pb.gT[a].x - pb.gP[a].x;
    ka_y[a] = pb.gT[a].y - pb.gP[a].y;
  }
  std::vector<Point> poly, scratch;
  std::vector<double> da(nb);

  const int ns = static_cast<int>(angles.size());
  for (int k = 0; k < ns; ++k) {
    double th0 = angles[k];
    double th1 = (k + 1 < ns) ? angles[k + 1] : angles[0] + 2.0 * M_PI;
    if (th1 - th0 < 1e-14) continue;
    for (const auto& [ta, wa] : gl_ang) {
      double th = th0 + ta * (th1 - th0);
      double wx = std::cos(th), wy = std::sin(th);
      double rmax = ray_exit(hull, wx, wy);
      if (rmax <= 1e-15) continue;
      double wang = wa * (th1 - th0);
      // radial substitution rho = rmax * tau^{1/(3-2s)} over two panels
      for (int panel = 0; panel < 2; ++panel) {
        double lo = panel * 0.5, len = 0.5;
        for (const auto& [tr, wr] : gl_rad) {
          double tau = lo + tr * len;
          double rho = rmax * std::pow(tau, m_exp);
          double jac = rmax * m_exp * std::pow(tau, m_exp - 1.0);
          double ex = rho * wx, ey = rho * wy;
          // clip T against T' + e
          poly.assign({T.v[0], T.v[1], T.v[2]});
          clip_by_triangle(poly, {P.v[0].x + ex, P.v[0].y + ey}, {P.v[1].x + ex, P.v[1].y + ey},
                           {P.v[2].x + ex, P.v[2].y + ey}, scratch);
          if (poly.size() < 3) continue;
          PolyMoments mo = polygon_moments(poly);
          double wtot = wang * wr * len * jac * std::pow(rho, -1.0 - 2.0 * s);
          for (int a = 0; a < nb; ++a) da[a] = pb.cT[a] - pb.cP[a] + pb.gP[a].x * ex + pb.gP[a].y * ey;
          for (int a = 0; a < nb; ++a)
            for (int b = a; b < nb; ++b) {
              double val = ka_x[a] * ka_x[b] * mo.m20 + (ka_x[a] * ka_y[b] + ka_y[a] * ka_x[b]) * mo.m11 +
                           ka_y[a] * ka_y[b] * mo.m02 + (da[a] * ka_x[b] + da[b] * ka_x[a]) * mo.m10 +
                           (da[a] * ka_y[b] + da[b] * ka_y[a]) * mo.m01 + da[a] * da[b] * mo.m00;
              acc[a * nb + b] += wtot * val;
            }
        }
      }
    }
  }
}

void scatter(const PairBasis& pb, const std::vector<double>& acc, double factor,
             Eigen::MatrixXd& A) {
  const int nb = pb.size();
  for (int a = 0; a < nb; ++a)
    for (int b = a; b < nb; ++b) {
      double val = factor * acc[a * nb + b];
      A(pb.slot[a], pb.slot[b]) += val;
      if (a != b) A(pb.slot[b], pb.slot[a]) += val;
    }
}

void touching_pair(const Mesh& mesh, const TriGeom& T, const TriGeom& P, double s, double factor,
                   Eigen::MatrixXd& A) {
  PairBasis pb = make_pair_basis(mesh, T, P);
  if (pb.size() == 0) return;
  std::vector<double> acc(pb.size() * pb.size(), 0.0);
  touching_pair_core(T, P, s, pb, acc);
  scatter(pb, acc, factor, A);
}

double point_segment_dist(const Point& p, const Point& a, const Point& b) {
  double vx = b.x - a.x, vy = b.y - a.y;
  double L2 = vx * vx + vy * vy;
  double t = L2 > 0 ? std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / L2, 0.0, 1.0) : 0.0;
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

double tri_distance(const TriGeom& T, const TriGeom& P) {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      d = std::min(d, point_segment_dist(T.v[i], P.v[j], P.v[(j + 1) % 3]));
      d = std::min(d, point_segment_dist(P.v[i], T.v[j], T.v[(j + 1) % 3]));
    }
  return d;
}

struct SubTri {
  Point v[3];
};

void split4(const SubTri& t, SubTri out[4]) {
  Point m01{0.5 * (t.v[0].x + t.v[1].x), 0.5 * (t.v[0].y + t.v[1].y)};
  Point m12{0.5 * (t.v[1].x + t.v[2].x), 0.5 * (t.v[1].y + t.v[2].y)};
  Point m02{0.5 * (t.v[0].x + t.v[2].x), 0.5 * (t.v[0].y + t.v[2].y)};
  out[0] = {t.v[0], m01, m02};
  out[1] = {m01, t.v[1], m12};
  out[2] = {m02, m12, t.v[2]};
  out[3] = {m01, m12, m02};
}

// Regular (disjoint) pair: tensor Dunavant rules with recursive subdivision
// of close pairs.
void disjoint_pair_recurse(const PairBasis& pb, const SubTri& T, const SubTri& P, double s,
                           int depth, std::vector<double>& acc) {
  double diamT = std::max({distance(T.v[0], T.v[1]), distance(T.v[1], T.v[2]), distance(T.v[0], T.v[2])});
  double diamP = std::max({distance(P.v[0], P.v[1]), distance(P.v[1], P.v[2]), distance(P.v[0], P.v[2])});
  TriGeom tg, pg;  // only vertices used below
  for (int i = 0; i < 3; ++i) {
    tg.v[i] = T.v[i];
    pg.v[i] = P.v[i];
  }
  double d = tri_distance(tg, pg);
  if (depth < 2 && d < 0.6 * std::max(diamT, diamP)) {
    SubTri Ts[4], Ps[4];
    split4(T, Ts);
    split4(P, Ps);
    for (auto& a : Ts)
      for (auto& b : Ps) disjoint_pair_recurse(pb, a, b, s, depth + 1, acc);
    return;
  }
  const auto& rule = tri_rule6();
  const int nb = pb.size();
  double areaT = 0.5 * std::abs(cross(T.v[1] - T.v[0], T.v[2] - T.v[0]));
  double areaP = 0.5 * std::abs(cross(P.v[1] - P.v[0], P.v[2] - P.v[0]));
  std::vector<double> phiT(nb), phiP(nb);
  for (const auto& qx : rule) {
    Point x = bary_point(T.v[0], T.v[1], T.v[2], qx.l1, qx.l2);
    for (int a = 0; a < nb; ++a) phiT[a] = pb.gT[a].x * x.x + pb.gT[a].y * x.y + pb.cT[a];
    for (const auto& qy : rule) {
      Point y = bary_point(P.v[0], P.v[1], P.v[2], qy.l1, qy.l2);
      double r2 = (x.x - y.x) * (x.x - y.x) + (x.y - y.y) * (x.y - y.y);
      double ker = std::pow(r2, -0.5 * (2.0 + 2.0 * s));
      double w = qx.w * qy.w * areaT * areaP * ker;
      for (int a = 0; a < nb; ++a) phiP[a] = pb.gP[a].x * y.x + pb.gP[a].y * y.y + pb.cP[a];
      for (int a = 0; a < nb; ++a) {
        double fa = phiT[a] - phiP[a];
        for (int b = a; b < nb; ++b) acc[a * nb + b] += w * fa * (phiT[b] - phiP[b]);
      }
    }
  }
}

void disjoint_pair(const Mesh& mesh, const TriGeom& T, const TriGeom& P, double s, double factor,
                   Eigen::MatrixXd& A) {
  PairBasis pb = make_pair_basis(mesh, T, P);
  const int nb = pb.size();
  if (nb == 0) return;
  std::vector<double> acc(nb * nb, 0.0);
  SubTri st{{T.v[0], T.v[1], T.v[2]}}, sp{{P.v[0], P.v[1], P.v[2]}};
  disjoint_pair_recurse(pb, st, sp, s, 0, acc);
  scatter(pb, acc, factor, A);
}

// Complement contribution 2 * int_T phi_a phi_b w(x) dx with graded
// subdivision for elements near the boundary.
void complement_on_element(const Mesh& mesh, const TriGeom& T, double s, Eigen::MatrixXd& A) {
  const Domain& dom = mesh.domain;
  const double R = dom.radius();
  int depth = 0;
  bool touches_boundary = false;
  double min_gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (!mesh.is_interior[T.node[a]]) touches_boundary = true;
    min_gap = std::min(min_gap, R - distance(T.v[a], dom.center()));
  }
  if (touches_boundary)
    depth = 4;
  else if (min_gap < 3.0 * mesh.h)
    depth = 2;

  int ii[3];
  for (int a = 0; a < 3; ++a) ii[a] = mesh.interior_index[T.node[a]];
  double acc[3][3] = {};
  const auto& rule = tri_rule6();

  std::vector<SubTri> stack{{{T.v[0], T.v[1], T.v[2]}}};
  for (int d = 0; d < depth; ++d) {
    std::vector<SubTri> next;
    next.reserve(stack.size() * 4);
    for (const auto& t : stack) {
      SubTri out[4];
      split4(t, out);
      for (auto& o : out) next.push_back(o);
    }
    stack.swap(next);
  }
  for (const auto& t : stack) {
    double area = 0.5 * std::abs(cross(t.v[1] - t.v[0], t.v[2] - t.v[0]));
    for (const auto& q : rule) {
      Point x = bary_point(t.v[0], t.v[1], t.v[2], q.l1, q.l2);
      double rho = distance(x, dom.center());
      if (rho >= R) continue;  // roundoff guard on boundary-touching cells
      double w = complement_kernel_mass(dom, s, x) * q.w * area;
      double phi[3];
      for (int a = 0; a < 3; ++a) phi[a] = T.g[a].x * x.x + T.g[a].y * x.y + T.c[a];
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) acc[a][b] += w * phi[a] * phi[b];
    }
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      if (ii[a] < 0 || ii[b] < 0) continue;
      double val = 2.0 * acc[a][b];
      A(ii[a], ii[b]) += val;
      if (a != b) A(ii[b], ii[a]) += val;
    }
}

int shared_vertices(const TriGeom& a, const TriGeom& b) {
  int n = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (a.node[i] == b.node[j]) ++n;
  return n;
}

}  // namespace

void assemble_disk_form(const Mesh& mesh, const KernelSpec& kernel, Eigen::MatrixXd& A_raw) {
  const double s = kernel.s;
  const int n = mesh.num_interior();
  std::vector<TriGeom> tris;
  tris.reserve(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) tris.push_back(make_tri(mesh, e));

  const int nel = mesh.num_elements();
  // element pairs are independent; a fixed worker count with an ordered
  // reduction keeps the assembly bit-deterministic
  const int workers = 4;
  std::vector<Eigen::MatrixXd> partial(workers, Eigen::MatrixXd::Zero(n, n));
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&, t]() {
      Eigen::MatrixXd& A = partial[t];
      for (int l = t; l < nel; l += workers) {
        self_pair(mesh, tris[l], s, A);
        complement_on_element(mesh, tris[l], s, A);
        for (int m = l + 1; m < nel; ++m) {
          int shared = shared_vertices(tris[l], tris[m]);
          if (shared > 0)
            touching_pair(mesh, tris[l], tris[m], s, 2.0, A);
          else
            disjoint_pair(mesh, tris[l], tris[m], s, 2.0, A);
        }
      }
    });
  for (auto& th : pool) th.join();
  A_raw = Eigen::MatrixXd::Zero(n, n);
  for (int t = 0; t < workers; ++t) A_raw += partial[t];
  if (!A_raw.allFinite())
    throw std::runtime_error("assemble_disk_form: non-finite pair integral (singular quadrature failure)");
}

double hat_pair_interaction_2d(const std::array<Point, 3>& Tv, const std::array<Point, 3>& Pv,
                               const Point& pa, const Point& pb_pt, double s) {
  auto same = [](const Point& a, const Point& b) {
    return std::abs(a.x - b.x) < 1e-13 && std::abs(a.y - b.y) < 1e-13;
  };
  // assign ids to the distinct vertices so the pair machinery can match hats
  std::vector<Point> verts;
  auto id_of = [&](const Point& p) {
    for (size_t i = 0; i < verts.size(); ++i)
      if (same(verts[i], p)) return static_cast<int>(i);
    verts.push_back(p);
    return static_cast<int>(verts.size()) - 1;
  };
  Mesh scratch(Domain::disk({0.0, 0.0}, 1.0, s));  // only vertex ids are used
  TriGeom T, P;
  for (int i = 0; i < 3; ++i) {
    T.v[i] = Tv[i];
    T.node[i] = id_of(Tv[i]);
  }
  for (int i = 0; i < 3; ++i) {
    P.v[i] = Pv[i];
    P.node[i] = id_of(Pv[i]);
  }
  // rebuild with orientation normalization and basis coefficients
  scratch.nodes = verts;
  scratch.elements.push_back({{T.node[0], T.node[1], T.node[2]}});
  scratch.elements.push_back({{P.node[0], P.node[1], P.node[2]}});
  T = make_tri(scratch, 0);
  P = make_tri(scratch, 1);

  int ia = id_of(pa), ib = id_of(pb_pt);
  int shared = shared_vertices(T, P);
  bool identical = shared == 3;
  if (identical) {
    double acc[3][3] = {};
    self_pair_core(T, s, acc);
    int la = -1, lb = -1;
    for (int i = 0; i < 3; ++i) {
      if (T.node[i] == ia) la = i;
      if (T.node[i] == ib) lb = i;
    }
    if (la < 0 || lb < 0) return 0.0;
    return acc[std::min(la, lb)][std::max(la, lb)];
  }
  PairBasis pb;
  pb.add(0, T, P, ia);
  if (ib != ia) pb.add(1, T, P, ib);
  std::vector<double> acc(pb.size() * pb.size(), 0.0);
  if (shared > 0) {
    touching_pair_core(T, P, s, pb, acc);
  } else {
    SubTri st{{T.v[0], T.v[1], T.v[2]}}, sp{{P.v[0], P.v[1], P.v[2]}};
    disjoint_pair_recurse(pb, st, sp, s, 0, acc);
  }
  return ib == ia ? acc[0] : acc[1];
}

}  // namespace fraclab

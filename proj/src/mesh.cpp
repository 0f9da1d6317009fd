#include "fraclab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace fraclab {

namespace {

double tri_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double tri_min_angle(const Point& a, const Point& b, const Point& c) {
  double la = distance(b, c), lb = distance(a, c), lc = distance(a, b);
  auto angle = [](double opp, double e1, double e2) {
    double cosv = (e1 * e1 + e2 * e2 - opp * opp) / (2.0 * e1 * e2);
    return std::acos(std::clamp(cosv, -1.0, 1.0));
  };
  return std::min({angle(la, lb, lc), angle(lb, la, lc), angle(lc, la, lb)});
}

void finalize_interior(Mesh& m) {
  m.interior_index.assign(m.num_nodes(), -1);
  for (int i = 0; i < m.num_nodes(); ++i) {
    if (m.is_interior[i]) {
      m.interior_index[i] = static_cast<int>(m.interior_nodes.size());
      m.interior_nodes.push_back(i);
    }
  }
}

std::shared_ptr<Mesh> build_interval_mesh(const Domain& dom, int resolution) {
  auto mesh = std::make_shared<Mesh>(dom);
  const double a = dom.left(), b = dom.right();
  const int n = resolution;
  mesh->resolution = resolution;
  mesh->spacing = (b - a) / n;
  mesh->nodes.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    double x = (i == n) ? b : a + i * mesh->spacing;
    mesh->nodes.push_back({x, 0.0});
  }
  for (int i = 0; i < n; ++i) mesh->elements.push_back({{i, i + 1, -1}});
  mesh->is_interior.assign(n + 1, true);
  mesh->is_interior.front() = false;
  mesh->is_interior.back() = false;
  mesh->h = mesh->spacing;
  finalize_interior(*mesh);
  return mesh;
}

// Concentric-ring triangulation: ring k carries 6k nodes at radius k*R/K.
// Each of the six sectors between rings k-1 and k is filled with 2k-1
// triangles in the standard strip pattern.
std::shared_ptr<Mesh> build_disk_mesh(const Domain& dom, int resolution, double min_angle_deg) {
  const double R = dom.radius();
  const Point c = dom.center();
  // K rings chosen so the measured diameter bound h <= R/resolution holds.
  int K = static_cast<int>(std::ceil(1.5 * resolution));

  auto mesh = std::make_shared<Mesh>(dom);
  mesh->resolution = resolution;
  std::vector<int> ring_start(K + 1, 0);
  mesh->nodes.push_back(c);  // ring 0
  for (int k = 1; k <= K; ++k) {
    ring_start[k] = mesh->num_nodes();
    const int nk = 6 * k;
    const double rk = R * k / K;
    for (int j = 0; j < nk; ++j) {
      double th = 2.0 * M_PI * j / nk;
      mesh->nodes.push_back({c.x + rk * std::cos(th), c.y + rk * std::sin(th)});
    }
  }
  // innermost fan
  for (int j = 0; j < 6; ++j)
    mesh->elements.push_back({{0, ring_start[1] + j, ring_start[1] + (j + 1) % 6}});
  // strips between ring k-1 and ring k
  for (int k = 2; k <= K; ++k) {
    const int ni = 6 * (k - 1), no = 6 * k;
    const int si = ring_start[k - 1], so = ring_start[k];
    for (int sct = 0; sct < 6; ++sct) {
      const int i0 = sct * (k - 1);  // first inner node of the sector
      const int o0 = sct * k;        // first outer node of the sector
      for (int t = 0; t < k - 1; ++t) {
        int in0 = si + (i0 + t) % ni;
        int in1 = si + (i0 + t + 1) % ni;
        int ot0 = so + (o0 + t) % no;
        int ot1 = so + (o0 + t + 1) % no;
        mesh->elements.push_back({{ot0, ot1, in0}});
        mesh->elements.push_back({{in0, ot1, in1}});
      }
      // closing triangle of the sector
      int in_last = si + (i0 + k - 1) % ni;
      int ot_last0 = so + (o0 + k - 1) % no;
      int ot_last1 = so + (o0 + k) % no;
      mesh->elements.push_back({{ot_last0, ot_last1, in_last}});
    }
  }
  mesh->is_interior.assign(mesh->num_nodes(), true);
  for (int j = 0; j < 6 * K; ++j) mesh->is_interior[ring_start[K] + j] = false;

  double h = 0.0, min_angle = M_PI;
  for (const auto& e : mesh->elements) {
    const Point &p0 = mesh->nodes[e.v[0]], &p1 = mesh->nodes[e.v[1]], &p2 = mesh->nodes[e.v[2]];
    h = std::max({h, distance(p0, p1), distance(p1, p2), distance(p0, p2)});
    min_angle = std::min(min_angle, tri_min_angle(p0, p1, p2));
  }
  mesh->h = h;
  if (min_angle * 180.0 / M_PI < min_angle_deg)
    throw std::runtime_error("build_mesh: degenerate disk triangulation, min angle " +
                             std::to_string(min_angle * 180.0 / M_PI) + " deg below floor");
  if (h > R / resolution)
    throw std::runtime_error("build_mesh: disk mesh size bound violated");
  finalize_interior(*mesh);
  return mesh;
}

}  // namespace

double Mesh::element_measure(int e) const {
  const Element& el = elements[e];
  if (el.size() == 2) return std::abs(nodes[el.v[1]].x - nodes[el.v[0]].x);
  return tri_area(nodes[el.v[0]], nodes[el.v[1]], nodes[el.v[2]]);
}

double Mesh::measure() const {
  double m = 0.0;
  for (int e = 0; e < num_elements(); ++e) m += element_measure(e);
  return m;
}

int Mesh::locate(const Point& p, double tol) const {
  if (domain.kind() == Domain::Kind::interval) {
    if (p.x < nodes.front().x - tol || p.x > nodes.back().x + tol) return -1;
    double x = std::clamp(p.x, nodes.front().x, nodes.back().x);
    int e = std::min(static_cast<int>((x - nodes.front().x) / spacing),
                     num_elements() - 1);
    return e;
  }
  for (int e = 0; e < num_elements(); ++e) {
    const Element& el = elements[e];
    const Point &a = nodes[el.v[0]], &b = nodes[el.v[1]], &c = nodes[el.v[2]];
    double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
    double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
    if (l1 >= -tol && l2 >= -tol && l1 + l2 <= 1.0 + tol) return e;
  }
  return -1;
}

std::shared_ptr<const Mesh> build_mesh(const Domain& domain, int resolution,
                                       double min_angle_deg) {
  if (resolution < 2) throw std::invalid_argument("build_mesh: resolution must be >= 2");
  if (domain.kind() == Domain::Kind::interval) return build_interval_mesh(domain, resolution);
  return build_disk_mesh(domain, resolution, min_angle_deg);
}

std::string mesh_to_json(const Mesh& mesh) {
  nlohmann::json j;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  const bool two_d = mesh.domain.dimension() == 2;
  for (const auto& p : mesh.nodes) {
    if (two_d)
      nodes.push_back({p.x, p.y});
    else
      nodes.push_back({p.x});
  }
  auto& els = j["elements"] = nlohmann::json::array();
  for (const auto& e : mesh.elements) {
    if (e.size() == 3)
      els.push_back({e.v[0], e.v[1], e.v[2]});
    else
      els.push_back({e.v[0], e.v[1]});
  }
  auto& bnd = j["boundary"] = nlohmann::json::array();
  for (int i = 0; i < mesh.num_nodes(); ++i)
    if (!mesh.is_interior[i]) bnd.push_back(i);
  return j.dump();
}

}  // namespace fraclab

#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "fraclab/geometry.hpp"

namespace fraclab {

// Simplex element: a segment (two node indices, third is -1) or a triangle.
struct Element {
  std::array<int, 3> v{-1, -1, -1};
  int size() const { return v[2] < 0 ? 2 : 3; }
};

/// Conforming mesh of a Domain. Nodes on the boundary are flagged; every
/// boundary node has boundary distance zero. Meshes are immutable after
/// construction and deterministic functions of (domain, resolution).
struct Mesh {
  Domain domain;
  std::vector<Point> nodes;
  std::vector<Element> elements;
  std::vector<bool> is_interior;       // per node
  std::vector<int> interior_index;     // node -> compact interior index, -1 on boundary
  std::vector<int> interior_nodes;     // compact interior index -> node
  double h = 0.0;                      // max element diameter
  double spacing = 0.0;                // uniform node spacing (1D only)
  int resolution = 0;

  explicit Mesh(Domain d) : domain(d) {}

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_interior() const { return static_cast<int>(interior_nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }

  double element_measure(int e) const;

  /// Total mesh measure (sum of element measures).
  double measure() const;

  /// Index of the element containing p (linear scan; -1 if none).
  int locate(const Point& p, double tol = 1e-12) const;
};

/// Uniform partition of an interval (resolution = element count) or a
/// quasi-uniform concentric-ring triangulation of a disk with
/// h <= radius/resolution. Rejects resolution < 2 and degenerate disk
/// triangulations whose minimum angle falls below min_angle_deg.
std::shared_ptr<const Mesh> build_mesh(const Domain& domain, int resolution,
                                       double min_angle_deg = 15.0);

/// JSON export: {"nodes": [[x,(y)],...], "elements": [[i,j,(k)],...], "boundary": [...]}.
std::string mesh_to_json(const Mesh& mesh);

}  // namespace fraclab

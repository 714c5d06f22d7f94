#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fetidg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a.x, s * a.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// Sides of a square subdomain, in the fixed enumeration order used everywhere.
enum class Side : int { South = 0, East = 1, North = 2, West = 3 };
constexpr std::array<Side, 4> kSides = {Side::South, Side::East, Side::North, Side::West};
inline Side opposite(Side s) { return Side((int(s) + 2) % 4); }

/// Geometrically conforming M x M partition of the unit square.
struct Partition {
  int M = 0;
  double H = 0.0;

  int count() const { return M * M; }
  int id(int row, int col) const { return row * M + col; }
  int row(int sub) const { return sub / M; }
  int col(int sub) const { return sub % M; }

  /// Neighbor subdomain across `s`, or -1 when that side lies on the domain boundary.
  int neighbor(int sub, Side s) const;
  /// Number of interior (interface) sides of `sub`.
  int interior_side_count(int sub) const;
};

Partition build_partition(int M);

/// One triangle of a subdomain mesh. Vertices are CCW; `node[k]` is the
/// lattice id of vertex k on the (m+1) x (m+1) local grid.
struct Tri {
  std::array<Vec2, 3> v;
  std::array<int, 3> node;

  double area() const { return 0.5 * cross(v[1] - v[0], v[2] - v[0]); }
};

/// An element edge lying on the subdomain boundary, oriented so that
/// endpoint lv0 comes before lv1 when walking the side in ascending
/// coordinate (x for South/North, y for East/West).
struct BoundaryEdge {
  int elem = -1;
  int lv0 = -1;
  int lv1 = -1;
};

/// An edge interior to the subdomain, shared by elements a and b.
/// `edge_a` / `edge_b` are the local edge ids (edge k runs from vertex k
/// to vertex (k+1)%3).
struct InteriorEdge {
  int elem_a = -1;
  int edge_a = -1;
  int elem_b = -1;
  int edge_b = -1;
};

/// Structured triangulation of one subdomain: m x m cells, each split along
/// the lower-left to upper-right diagonal. Element 2*(r*m+c) is the lower
/// triangle of cell (c,r), element 2*(r*m+c)+1 the upper one.
struct SubdomainMesh {
  int sub = -1;
  int m = 0;
  double h = 0.0;  // fine mesh size H/m
  int grid_col = 0, grid_row = 0;

  std::vector<Tri> elems;
  std::vector<InteriorEdge> interior_edges;
  std::array<std::vector<BoundaryEdge>, 4> side_edges;  // indexed by Side

  int lower_elem(int c, int r) const { return 2 * (r * m + c); }
  int upper_elem(int c, int r) const { return 2 * (r * m + c) + 1; }

  /// Position of local lattice node (c, r).
  Vec2 node_pos(int c, int r) const;
  Vec2 node_pos(int node) const { return node_pos(node % (m + 1), node / (m + 1)); }

  /// Outward unit normal of side `s`.
  Vec2 outward_normal(Side s) const;
};

SubdomainMesh triangulate_subdomain(const Partition& part, int sub, int m);

/// Shared interface segment between two subdomains (or a subdomain and the
/// domain boundary). For interior pairs the fine edges of both sides
/// coincide geometrically one-to-one, in ascending order along the edge.
struct MacroEdgePair {
  int sub_i = -1;
  Side side_i = Side::South;
  int sub_j = -1;            // -1 for boundary macro edges
  Side side_j = Side::South;
  bool boundary = false;
};

struct Interface {
  std::vector<MacroEdgePair> edges;
  // per subdomain, per side: index into `edges` (-1 if none, e.g. M=1 boundary sides are present)
  std::vector<std::array<int, 4>> edge_of_side;

  bool side_is_interface(int sub, Side s) const {
    int e = edge_of_side[sub][int(s)];
    return e >= 0 && !edges[e].boundary;
  }
};

/// Enumerates all macro edges. Interior macro edges appear once, owned by
/// the lower subdomain index. Throws if neighboring meshes do not match.
Interface enumerate_interface(const Partition& part, const std::vector<SubdomainMesh>& meshes);

}  // namespace fetidg

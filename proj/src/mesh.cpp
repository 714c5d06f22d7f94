#include "fetidg/mesh.hpp"

#include <algorithm>

namespace fetidg {

int Partition::neighbor(int sub, Side s) const {
  int r = row(sub), c = col(sub);
  switch (s) {
    case Side::South: return r > 0 ? id(r - 1, c) : -1;
    case Side::East: return c < M - 1 ? id(r, c + 1) : -1;
    case Side::North: return r < M - 1 ? id(r + 1, c) : -1;
    case Side::West: return c > 0 ? id(r, c - 1) : -1;
  }
  return -1;
}

int Partition::interior_side_count(int sub) const {
  int n = 0;
  for (Side s : kSides)
    if (neighbor(sub, s) >= 0) ++n;
  return n;
}

Partition build_partition(int M) {
  if (M < 1) throw std::invalid_argument("build_partition: M must be >= 1");
  Partition p;
  p.M = M;
  p.H = 1.0 / M;
  return p;
}

Vec2 SubdomainMesh::node_pos(int c, int r) const {
  // Positions come from the global fine lattice so that matching interface
  // nodes of neighboring subdomains are bit-identical.
  long gx = static_cast<long>(grid_col) * m + c;
  long gy = static_cast<long>(grid_row) * m + r;
  return {double(gx) * h, double(gy) * h};
}

Vec2 SubdomainMesh::outward_normal(Side s) const {
  switch (s) {
    case Side::South: return {0.0, -1.0};
    case Side::East: return {1.0, 0.0};
    case Side::North: return {0.0, 1.0};
    case Side::West: return {-1.0, 0.0};
  }
  return {0.0, 0.0};
}

SubdomainMesh triangulate_subdomain(const Partition& part, int sub, int m) {
  if (m < 1) throw std::invalid_argument("triangulate_subdomain: m must be >= 1");
  SubdomainMesh mesh;
  mesh.sub = sub;
  mesh.m = m;
  mesh.h = 1.0 / (double(part.M) * double(m));
  mesh.grid_col = part.col(sub);
  mesh.grid_row = part.row(sub);

  auto node = [m](int c, int r) { return r * (m + 1) + c; };

  mesh.elems.reserve(2 * m * m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      Tri lo, up;
      lo.node = {node(c, r), node(c + 1, r), node(c + 1, r + 1)};
      up.node = {node(c, r), node(c + 1, r + 1), node(c, r + 1)};
      for (int k = 0; k < 3; ++k) {
        lo.v[k] = mesh.node_pos(lo.node[k]);
        up.v[k] = mesh.node_pos(up.node[k]);
      }
      mesh.elems.push_back(lo);
      mesh.elems.push_back(up);
    }
  }

  // Interior edges: match element edges by sorted lattice-node pair.
  // Key = min*(m+1)^2 + max.
  const long nn = long(m + 1) * (m + 1);
  std::vector<std::pair<long, std::pair<int, int>>> half_edges;
  half_edges.reserve(mesh.elems.size() * 3);
  for (int e = 0; e < int(mesh.elems.size()); ++e) {
    for (int k = 0; k < 3; ++k) {
      int a = mesh.elems[e].node[k], b = mesh.elems[e].node[(k + 1) % 3];
      long key = std::min(a, b) * nn + std::max(a, b);
      half_edges.push_back({key, {e, k}});
    }
  }
  std::sort(half_edges.begin(), half_edges.end(),
            [](const auto& p, const auto& q) { return p.first < q.first; });
  for (size_t i = 0; i + 1 < half_edges.size(); ++i) {
    if (half_edges[i].first == half_edges[i + 1].first) {
      InteriorEdge ie;
      ie.elem_a = half_edges[i].second.first;
      ie.edge_a = half_edges[i].second.second;
      ie.elem_b = half_edges[i + 1].second.first;
      ie.edge_b = half_edges[i + 1].second.second;
      mesh.interior_edges.push_back(ie);
      ++i;
    }
  }

  // Boundary fine edges per side, ascending along the side.
  for (int c = 0; c < m; ++c)
    mesh.side_edges[int(Side::South)].push_back({mesh.lower_elem(c, 0), 0, 1});
  for (int r = 0; r < m; ++r)
    mesh.side_edges[int(Side::East)].push_back({mesh.lower_elem(m - 1, r), 1, 2});
  for (int c = 0; c < m; ++c)
    mesh.side_edges[int(Side::North)].push_back({mesh.upper_elem(c, m - 1), 2, 1});
  for (int r = 0; r < m; ++r)
    mesh.side_edges[int(Side::West)].push_back({mesh.upper_elem(0, r), 0, 2});

  return mesh;
}

Interface enumerate_interface(const Partition& part, const std::vector<SubdomainMesh>& meshes) {
  if (int(meshes.size()) != part.count())
    throw std::invalid_argument("enumerate_interface: one mesh per subdomain required");

  Interface iface;
  iface.edge_of_side.assign(part.count(), {-1, -1, -1, -1});

  for (int sub = 0; sub < part.count(); ++sub) {
    for (Side s : kSides) {
      int nb = part.neighbor(sub, s);
      if (nb >= 0 && nb < sub) continue;  // owned by the lower index
      MacroEdgePair me;
      me.sub_i = sub;
      me.side_i = s;
      if (nb >= 0) {
        if (meshes[sub].m != meshes[nb].m)
          throw std::runtime_error("enumerate_interface: neighboring meshes do not match (m differs)");
        me.sub_j = nb;
        me.side_j = opposite(s);
        me.boundary = false;
        iface.edge_of_side[nb][int(me.side_j)] = int(iface.edges.size());
      } else {
        me.boundary = true;
      }
      iface.edge_of_side[sub][int(s)] = int(iface.edges.size());
      iface.edges.push_back(me);
    }
  }
  return iface;
}

}  // namespace fetidg

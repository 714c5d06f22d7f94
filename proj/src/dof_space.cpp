#include "fetidg/dof_space.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace fetidg {

const char* to_string(DofClass c) {
  switch (c) {
    case DofClass::Interior: return "I";
    case DofClass::GammaOwn: return "Gamma";
    case DofClass::CornerOwn: return "V";
    case DofClass::TraceDual: return "TraceDelta";
    case DofClass::TraceCorner: return "TraceV";
  }
  return "?";
}

SubdomainDofs build_subdomain_dofs(const Partition& part, const std::vector<SubdomainMesh>& meshes,
                                   const Interface& iface, int sub) {
  const SubdomainMesh& mesh = meshes[sub];
  const int m = mesh.m;

  SubdomainDofs d;
  d.sub = sub;
  d.m = m;
  d.own_count = 3 * int(mesh.elems.size());
  d.total = d.own_count;
  for (Side s : kSides)
    if (iface.side_is_interface(sub, s)) {
      d.trace_offset[int(s)] = d.total;
      d.total += 2 * m;
    }

  d.cls.assign(d.total, DofClass::Interior);
  d.pos.resize(d.total);
  d.iface_nbr.assign(d.total, -1);

  for (int e = 0; e < int(mesh.elems.size()); ++e)
    for (int lv = 0; lv < 3; ++lv) d.pos[3 * e + lv] = mesh.elems[e].v[lv];

  auto is_corner_node = [m](int node) {
    int c = node % (m + 1), r = node / (m + 1);
    return (c == 0 || c == m) && (r == 0 || r == m);
  };

  // Own dofs: an own dof is an interface dof iff it is an endpoint of an
  // element edge lying on an interior macro edge; elements touching an
  // interface by a single vertex only contribute interior dofs.
  for (Side s : kSides) {
    if (!iface.side_is_interface(sub, s)) continue;
    int nbr = part.neighbor(sub, s);
    for (const BoundaryEdge& be : mesh.side_edges[int(s)]) {
      for (int lv : {be.lv0, be.lv1}) {
        int dof = 3 * be.elem + lv;
        bool corner = is_corner_node(mesh.elems[be.elem].node[lv]);
        d.cls[dof] = corner ? DofClass::CornerOwn : DofClass::GammaOwn;
        if (d.iface_nbr[dof] < 0) d.iface_nbr[dof] = nbr;
      }
    }
  }

  // Trace copies of the neighbor's boundary values.
  for (Side s : kSides) {
    if (d.trace_offset[int(s)] < 0) continue;
    int nbr = part.neighbor(sub, s);
    const SubdomainMesh& nbm = meshes[nbr];
    Side s_nbr = opposite(s);
    for (int k = 0; k < m; ++k) {
      const BoundaryEdge& own_be = mesh.side_edges[int(s)][k];
      const BoundaryEdge& nb_be = nbm.side_edges[int(s_nbr)][k];
      for (int end = 0; end < 2; ++end) {
        int dof = d.trace_dof(s, k, end);
        bool corner = (k == 0 && end == 0) || (k == m - 1 && end == 1);
        d.cls[dof] = corner ? DofClass::TraceCorner : DofClass::TraceDual;
        d.pos[dof] = mesh.elems[own_be.elem].v[end == 0 ? own_be.lv0 : own_be.lv1];
        d.trace_source.push_back({nbr, 3 * nb_be.elem + (end == 0 ? nb_be.lv0 : nb_be.lv1)});
        d.trace_side.push_back(s);
        d.iface_nbr[dof] = nbr;
      }
    }
  }

  d.delta_pos.assign(d.total, -1);
  d.interior_pos.assign(d.total, -1);
  for (int i = 0; i < d.total; ++i) {
    switch (d.cls[i]) {
      case DofClass::Interior:
        d.interior_pos[i] = int(d.interior.size());
        d.interior.push_back(i);
        break;
      case DofClass::GammaOwn:
      case DofClass::TraceDual:
        d.delta_pos[i] = int(d.delta.size());
        d.delta.push_back(i);
        break;
      default:
        d.vprime.push_back(i);
    }
  }
  return d;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

SpaceMaps build_space_maps(const Partition& part, const std::vector<SubdomainMesh>& meshes,
                           const Interface& iface, CornerPolicy policy) {
  SpaceMaps maps;
  maps.policy = policy;
  maps.subs.reserve(part.count());
  for (int sub = 0; sub < part.count(); ++sub)
    maps.subs.push_back(build_subdomain_dofs(part, meshes, iface, sub));

  std::vector<int> offset(part.count() + 1, 0);
  for (int sub = 0; sub < part.count(); ++sub) offset[sub + 1] = offset[sub] + maps.subs[sub].total;
  auto gid = [&offset](int sub, int local) { return offset[sub] + local; };

  // Primal groups: per macro-edge endpoint the own edge-limit value on each
  // side is identified with the neighbor's copy of it; MergeAtCorner then
  // collapses everything meeting at one geometric corner.
  UnionFind uf(offset.back());
  std::vector<char> touched(offset.back(), 0);
  std::map<std::pair<int, int>, int> corner_anchor;  // coarse corner -> representative gid

  for (const MacroEdgePair& me : iface.edges) {
    if (me.boundary) continue;
    const int i = me.sub_i, j = me.sub_j;
    const SubdomainMesh& mi = meshes[i];
    const SubdomainMesh& mj = meshes[j];
    const int m = mi.m;
    for (int a = 0; a < 2; ++a) {
      int k = (a == 0) ? 0 : m - 1;
      int end = a;
      int own_i = maps.subs[i].own_side_dof(mi, me.side_i, k, end);
      int own_j = maps.subs[j].own_side_dof(mj, me.side_j, k, end);
      int tr_in_i = maps.subs[i].trace_dof(me.side_i, k, end);
      int tr_in_j = maps.subs[j].trace_dof(me.side_j, k, end);
      uf.unite(gid(i, own_i), gid(j, tr_in_j));
      uf.unite(gid(j, own_j), gid(i, tr_in_i));
      for (int g : {gid(i, own_i), gid(j, own_j), gid(i, tr_in_i), gid(j, tr_in_j)}) touched[g] = 1;

      if (policy == CornerPolicy::MergeAtCorner) {
        // Coarse corner in (col, row) units of the M+1 grid.
        int cc, rr;
        if (me.side_i == Side::East) {
          cc = part.col(i) + 1;
          rr = part.row(i) + a;
        } else {  // owned interior edges are East or North
          cc = part.col(i) + a;
          rr = part.row(i) + 1;
        }
        auto [it, inserted] = corner_anchor.insert({{cc, rr}, gid(i, own_i)});
        if (!inserted) uf.unite(gid(i, own_i), it->second);
        uf.unite(gid(i, own_i), gid(j, own_j));
      }
    }
  }

  std::map<int, int> root_to_group;
  for (int g = 0; g < offset.back(); ++g) {
    if (!touched[g]) continue;
    int root = uf.find(g);
    auto [it, inserted] = root_to_group.insert({root, int(maps.groups.size())});
    if (inserted) maps.groups.push_back({});
    int sub = int(std::upper_bound(offset.begin(), offset.end(), g) - offset.begin()) - 1;
    maps.groups[it->second].push_back({sub, g - offset[sub]});
  }
  // Groups are created while scanning gids in ascending order, so group
  // numbering and member order are deterministic.

  // Multipliers: one row per own dual dof, ordered by (sub, side, k, end).
  maps.b_cols.assign(part.count(), {});
  for (int sub = 0; sub < part.count(); ++sub) {
    const SubdomainDofs& di = maps.subs[sub];
    const SubdomainMesh& mesh = meshes[sub];
    for (Side s : kSides) {
      if (!iface.side_is_interface(sub, s)) continue;
      int nbr = part.neighbor(sub, s);
      const SubdomainDofs& dj = maps.subs[nbr];
      for (int k = 0; k < di.m; ++k) {
        for (int end = 0; end < 2; ++end) {
          int own = di.own_side_dof(mesh, s, k, end);
          if (di.cls[own] != DofClass::GammaOwn) continue;
          int tr = dj.trace_dof(opposite(s), k, end);
          int row = int(maps.multipliers.size());
          maps.multipliers.push_back({sub, own, nbr, tr});
          maps.b_cols[sub].push_back({row, di.delta_pos[own], +1.0});
          maps.b_cols[nbr].push_back({row, dj.delta_pos[tr], -1.0});
        }
      }
    }
  }
  for (auto& cols : maps.b_cols)
    std::sort(cols.begin(), cols.end(),
              [](const SpaceMaps::BEntry& a, const SpaceMaps::BEntry& b) { return a.row < b.row; });

  // Global (I, Delta, Pi) layout.
  maps.I_offset.assign(part.count(), 0);
  maps.D_offset.assign(part.count(), 0);
  maps.refs.resize(part.count());
  for (int sub = 0; sub < part.count(); ++sub) {
    maps.I_offset[sub] = maps.n_I;
    maps.D_offset[sub] = maps.n_D;
    maps.n_I += int(maps.subs[sub].interior.size());
    maps.n_D += int(maps.subs[sub].delta.size());
    maps.refs[sub].resize(maps.subs[sub].total, {SpaceMaps::Blk::P, -1});
  }
  maps.n_P = int(maps.groups.size());
  for (int sub = 0; sub < part.count(); ++sub) {
    const SubdomainDofs& di = maps.subs[sub];
    for (int i : di.interior)
      maps.refs[sub][i] = {SpaceMaps::Blk::I, maps.I_offset[sub] + di.interior_pos[i]};
    for (int i : di.delta)
      maps.refs[sub][i] = {SpaceMaps::Blk::D, maps.D_offset[sub] + di.delta_pos[i]};
  }
  for (int g = 0; g < maps.n_P; ++g)
    for (const GlobalDofRef& r : maps.groups[g]) {
      if (maps.refs[r.sub][r.local].idx != -1)
        throw std::runtime_error("build_space_maps: primal groups do not partition V'");
      maps.refs[r.sub][r.local] = {SpaceMaps::Blk::P, g};
    }
  for (int sub = 0; sub < part.count(); ++sub)
    for (int i : maps.subs[sub].vprime)
      if (maps.refs[sub][i].idx == -1)
        throw std::runtime_error("build_space_maps: V' dof not covered by any primal group");

  return maps;
}

std::string dump_classification_json(const SubdomainDofs& dofs) {
  nlohmann::json j;
  j["sub"] = dofs.sub;
  j["m"] = dofs.m;
  j["own_count"] = dofs.own_count;
  j["total"] = dofs.total;
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < dofs.total; ++i) {
    arr.push_back({{"id", i},
                   {"class", to_string(dofs.cls[i])},
                   {"x", dofs.pos[i].x},
                   {"y", dofs.pos[i].y}});
  }
  j["dofs"] = std::move(arr);
  return j.dump(2);
}

}  // namespace fetidg

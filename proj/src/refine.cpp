#include "fetidg/refine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fetidg {

namespace {

// barycentric coordinates of q in triangle t
std::array<double, 3> barycentric(const Tri& t, const Vec2& q) {
  double inv2A = 1.0 / (2.0 * t.area());
  std::array<double, 3> lam;
  lam[0] = cross(t.v[1] - q, t.v[2] - q) * inv2A;
  lam[1] = cross(t.v[2] - q, t.v[0] - q) * inv2A;
  lam[2] = cross(t.v[0] - q, t.v[1] - q) * inv2A;
  return lam;
}

double eval_linear(const Tri& t, const Eigen::VectorXd& u, int elem, const Vec2& q) {
  auto lam = barycentric(t, q);
  return lam[0] * u[3 * elem] + lam[1] * u[3 * elem + 1] + lam[2] * u[3 * elem + 2];
}

int side_param(Side s, int tx, int ty, int tmax) {
  switch (s) {
    case Side::South: return ty == 0 ? tx : -1;
    case Side::East: return tx == tmax ? ty : -1;
    case Side::North: return ty == tmax ? tx : -1;
    case Side::West: return tx == 0 ? ty : -1;
  }
  return -1;
}

}  // namespace

RefinedMesh refine_subdomain(const SubdomainMesh& mesh) {
  const int m = mesh.m;
  const int tmax = 6 * m;
  RefinedMesh ref;
  ref.sub = mesh.sub;
  ref.m = m;

  // Which element edges lie on the subdomain boundary.
  std::vector<std::array<bool, 3>> on_bdry(mesh.elems.size(), {false, false, false});
  for (Side s : kSides) {
    for (const BoundaryEdge& be : mesh.side_edges[int(s)]) {
      int a = std::min(be.lv0, be.lv1), b = std::max(be.lv0, be.lv1);
      int edge = (a == 0 && b == 1) ? 0 : (a == 1 && b == 2) ? 1 : 2;
      on_bdry[be.elem][edge] = true;
    }
  }

  std::map<long, int> node_of;
  Vec2 origin = mesh.node_pos(0, 0);
  auto add_node = [&](const Vec2& p, char type, int owner) {
    long tx = std::lround(6.0 * (p.x - origin.x) / mesh.h);
    long ty = std::lround(6.0 * (p.y - origin.y) / mesh.h);
    long key = ty * (tmax + 1) + tx;
    auto [it, inserted] = node_of.insert({key, int(ref.nodes.size())});
    if (inserted) {
      RefinedMesh::Node n;
      n.tx = int(tx);
      n.ty = int(ty);
      n.pos = p;
      n.type = type;
      ref.nodes.push_back(n);
    } else if (ref.nodes[it->second].type != type) {
      throw std::runtime_error("refine_subdomain: conflicting node types at a corner");
    }
    RefinedMesh::Node& n = ref.nodes[it->second];
    if (type != 'V' || owner >= 0) {
      if (std::find(n.avg_elems.begin(), n.avg_elems.end(), owner) == n.avg_elems.end())
        n.avg_elems.push_back(owner);
    }
    return it->second;
  };

  auto mid = [](const Vec2& a, const Vec2& b) { return Vec2{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; };
  auto push_child = [&ref](int a, int b, int c, int parent) {
    const Vec2& pa = ref.nodes[a].pos;
    if (cross(ref.nodes[b].pos - pa, ref.nodes[c].pos - pa) < 0.0) std::swap(b, c);
    ref.children.push_back({a, b, c});
    ref.child_parent.push_back(parent);
  };
  auto comb = [](double wa, const Vec2& a, double wb, const Vec2& b, double wc, const Vec2& c) {
    return Vec2{wa * a.x + wb * b.x + wc * c.x, wa * a.y + wb * b.y + wc * c.y};
  };

  for (int e = 0; e < int(mesh.elems.size()); ++e) {
    const Tri& t = mesh.elems[e];
    int nb = int(on_bdry[e][0]) + int(on_bdry[e][1]) + int(on_bdry[e][2]);
    std::array<int, 3> C{}, M{-1, -1, -1}, V{-1, -1, -1};

    if (nb == 0) {
      for (int k = 0; k < 3; ++k) V[k] = add_node(t.v[k], 'V', e);
      // M_k is the midpoint of the edge opposite vertex k.
      for (int k = 0; k < 3; ++k) M[k] = add_node(mid(t.v[(k + 1) % 3], t.v[(k + 2) % 3]), 'M', e);
      C[0] = add_node(comb(4.0 / 6, t.v[0], 1.0 / 6, t.v[1], 1.0 / 6, t.v[2]), 'C', e);
      C[1] = add_node(comb(1.0 / 6, t.v[0], 4.0 / 6, t.v[1], 1.0 / 6, t.v[2]), 'C', e);
      C[2] = add_node(comb(1.0 / 6, t.v[0], 1.0 / 6, t.v[1], 4.0 / 6, t.v[2]), 'C', e);
      int c1 = C[0], c2 = C[1], c3 = C[2], m1 = M[0], m2 = M[1], m3 = M[2];
      int v1 = V[0], v2 = V[1], v3 = V[2];
      for (auto tri : {std::array<int, 3>{c1, c2, c3}, {v1, m3, c1}, {m3, c2, c1}, {m3, v2, c2},
                       {v2, m1, c2}, {m1, c3, c2}, {m1, v3, c3}, {v3, m2, c3}, {m2, c1, c3},
                       {m2, v1, c1}})
        push_child(tri[0], tri[1], tri[2], e);
      ref.parent_cnodes.push_back({c1, c2, c3});
    } else if (nb == 1) {
      // a = vertex opposite the boundary edge; the boundary edge is (b, c).
      int bk = on_bdry[e][0] ? 0 : on_bdry[e][1] ? 1 : 2;
      int a = (bk + 2) % 3, b = bk, c = (bk + 1) % 3;
      int v1 = add_node(t.v[a], 'V', e);
      int v2 = add_node(t.v[b], 'V', e);
      int v3 = add_node(t.v[c], 'V', e);
      int m2 = add_node(mid(t.v[a], t.v[c]), 'M', e);
      int m3 = add_node(mid(t.v[a], t.v[b]), 'M', e);
      int c1 = add_node(comb(1.0 / 3, t.v[a], 1.0 / 3, t.v[b], 1.0 / 3, t.v[c]), 'C', e);
      int c2 = add_node(comb(0.0, t.v[a], 4.0 / 6, t.v[b], 2.0 / 6, t.v[c]), 'C', e);
      int c3 = add_node(comb(0.0, t.v[a], 2.0 / 6, t.v[b], 4.0 / 6, t.v[c]), 'C', e);
      for (auto tri : {std::array<int, 3>{v1, m3, c1}, {m3, v2, c1}, {v2, c2, c1}, {c2, c3, c1},
                       {c3, v3, c1}, {v3, m2, c1}, {m2, v1, c1}})
        push_child(tri[0], tri[1], tri[2], e);
      ref.parent_cnodes.push_back({c1, c2, c3});
    } else if (nb == 2) {
      // c1v = shared vertex of the two boundary edges.
      int ik = !on_bdry[e][0] ? 0 : !on_bdry[e][1] ? 1 : 2;  // the interior edge
      int b = ik, c = (ik + 1) % 3, a = (ik + 2) % 3;        // boundary edges meet at a
      int c1 = add_node(t.v[a], 'C', e);
      int v2 = add_node(t.v[b], 'V', e);
      int v3 = add_node(t.v[c], 'V', e);
      int m1 = add_node(mid(t.v[b], t.v[c]), 'M', e);
      int c2 = add_node(mid(t.v[a], t.v[c]), 'C', e);
      int c3 = add_node(mid(t.v[a], t.v[b]), 'C', e);
      for (auto tri : {std::array<int, 3>{c1, c3, c2}, {c3, v2, m1}, {m1, c3, c2}, {m1, v3, c2}})
        push_child(tri[0], tri[1], tri[2], e);
      ref.parent_cnodes.push_back({c1, c2, c3});
    } else {
      int c1 = add_node(t.v[0], 'C', e);
      int c2 = add_node(t.v[1], 'C', e);
      int c3 = add_node(t.v[2], 'C', e);
      push_child(c1, c2, c3, e);
      ref.parent_cnodes.push_back({c1, c2, c3});
    }
  }

  // Averaging sets for boundary V nodes: only the elements owning the two
  // incident boundary fine edges participate.
  for (int id = 0; id < int(ref.nodes.size()); ++id) {
    RefinedMesh::Node& n = ref.nodes[id];
    if (n.type != 'V') continue;
    bool boundary = n.tx == 0 || n.tx == tmax || n.ty == 0 || n.ty == tmax;
    if (!boundary) continue;
    std::vector<int> owners;
    for (Side s : kSides) {
      int t = side_param(s, n.tx, n.ty, tmax);
      if (t < 0 || t % 6 != 0) continue;
      int k = t / 6;
      if (k > 0) owners.push_back(mesh.side_edges[int(s)][k - 1].elem);
      if (k < m) owners.push_back(mesh.side_edges[int(s)][k].elem);
    }
    if (owners.empty()) throw std::runtime_error("refine_subdomain: boundary V node without edges");
    n.avg_elems = owners;
  }

  for (Side s : kSides) {
    std::vector<RefinedMesh::SideNode>& list = ref.side_nodes[int(s)];
    for (int id = 0; id < int(ref.nodes.size()); ++id) {
      int t = side_param(s, ref.nodes[id].tx, ref.nodes[id].ty, tmax);
      if (t >= 0) list.push_back({t, id});
    }
    std::sort(list.begin(), list.end(),
              [](const RefinedMesh::SideNode& a, const RefinedMesh::SideNode& b) { return a.t < b.t; });
    auto& cn = ref.edge_cnodes[int(s)];
    cn.resize(m);
    for (int k = 0; k < m; ++k) {
      std::vector<int> cs;
      for (const auto& sn : list)
        if (sn.t >= 6 * k && sn.t <= 6 * k + 6 && ref.nodes[sn.node].type == 'C')
          cs.push_back(sn.node);
      if (cs.size() != 2)
        throw std::runtime_error("refine_subdomain: boundary fine edge without two C nodes");
      cn[k] = {cs[0], cs[1]};
    }
  }
  return ref;
}

RefinedSubdomain::RefinedSubdomain(const Problem& p, int sub)
    : p_(&p),
      sub_(sub),
      dofs_(&p.maps.subs[sub]),
      parent_(&p.meshes[sub]),
      ref_(refine_subdomain(p.meshes[sub])) {
  n_total_ = n_own();
  for (Side s : kSides) {
    if (!p.iface.side_is_interface(sub, s)) continue;
    int nb = p.part.neighbor(sub, s);
    RefinedMesh nb_ref = refine_subdomain(p.meshes[nb]);
    Side s_nb = opposite(s);
    trace_offset_[int(s)] = n_total_;
    trace_nodes_[int(s)] = nb_ref.side_nodes[int(s_nb)];
    // Re-index side nodes by ascending-t position within this block and
    // translate the per-edge C nodes to block-local indices.
    std::map<int, int> by_t;
    for (int q = 0; q < int(trace_nodes_[int(s)].size()); ++q)
      by_t[trace_nodes_[int(s)][q].t] = q;
    auto& cn = trace_edge_cnodes_[int(s)];
    cn.resize(ref_.m);
    for (int k = 0; k < ref_.m; ++k) {
      const auto& pair = nb_ref.edge_cnodes[int(s_nb)][k];
      int t0 = side_param(s_nb, nb_ref.nodes[pair[0]].tx, nb_ref.nodes[pair[0]].ty, 6 * ref_.m);
      int t1 = side_param(s_nb, nb_ref.nodes[pair[1]].tx, nb_ref.nodes[pair[1]].ty, 6 * ref_.m);
      cn[k] = {by_t.at(std::min(t0, t1)), by_t.at(std::max(t0, t1))};
    }
    n_total_ += int(trace_nodes_[int(s)].size());
  }

  // Parent forms.
  const Partition& part = p.part;
  A_vol_par_ = assemble_local(part, p.meshes, p.iface, *dofs_, p.coeff, p.penalty, kVolume).A;
  P_par_ = assemble_local(part, p.meshes, p.iface, *dofs_, p.coeff, p.penalty,
                          kInterfaceP | kBoundaryP)
               .A;
  D_par_ = assemble_local(part, p.meshes, p.iface, *dofs_, p.coeff, p.penalty, kFormD).A;

  // Refined volume form.
  double rho = p.coeff.rho(part, sub);
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& ch : ref_.children) {
    Tri t;
    for (int k = 0; k < 3; ++k) {
      t.v[k] = ref_.nodes[ch[k]].pos;
      t.node[k] = ch[k];
    }
    Eigen::Matrix3d K = element_stiffness(t, rho);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (K(i, j) != 0.0) trips.emplace_back(ch[i], ch[j], K(i, j));
  }
  A_vol_ref_.resize(n_total_, n_total_);
  A_vol_ref_.setFromTriplets(trips.begin(), trips.end());

  build_penalty_form();

  // Gamma_i nodes (closure of the interface sides) are Dirichlet data for
  // the refined harmonic extension; all other own nodes are free.
  node_role_.assign(n_own(), 0);
  std::vector<char> is_dir(n_own(), 0);
  for (Side s : kSides) {
    if (!p.iface.side_is_interface(sub, s)) continue;
    for (const auto& sn : ref_.side_nodes[int(s)]) is_dir[sn.node] = 1;
  }
  for (int id = 0; id < n_own(); ++id) {
    if (is_dir[id]) {
      node_role_[id] = -1;
      dirichlet_.push_back(id);
    } else {
      node_role_[id] = int(free_.size());
      free_.push_back(id);
    }
  }
  std::vector<Eigen::Triplet<double>> tff, tfd;
  for (int col = 0; col < A_vol_ref_.outerSize(); ++col) {
    for (SpMat::InnerIterator it(A_vol_ref_, col); it; ++it) {
      int r = int(it.row());
      if (r >= n_own() || col >= n_own()) continue;
      if (node_role_[r] >= 0 && node_role_[col] >= 0)
        tff.emplace_back(node_role_[r], node_role_[col], it.value());
      else if (node_role_[r] >= 0 && node_role_[col] < 0) {
        int dpos = int(std::lower_bound(dirichlet_.begin(), dirichlet_.end(), col) -
                       dirichlet_.begin());
        tfd.emplace_back(node_role_[r], dpos, it.value());
      }
    }
  }
  SpMat A_ff(int(free_.size()), int(free_.size()));
  A_ff.setFromTriplets(tff.begin(), tff.end());
  A_free_dir_.resize(int(free_.size()), int(dirichlet_.size()));
  A_free_dir_.setFromTriplets(tfd.begin(), tfd.end());
  if (!free_.empty()) {
    harm_fac_.compute(A_ff);
    if (harm_fac_.info() != Eigen::Success)
      throw std::runtime_error("RefinedSubdomain: refined harmonic factorization failed");
  }
}

void RefinedSubdomain::build_penalty_form() {
  const double rho = p_->coeff.rho(p_->part, sub_);
  const double delta = p_->penalty.delta;
  const double h = parent_->h;
  const int m = ref_.m;
  std::vector<Eigen::Triplet<double>> trips;

  struct Pt {
    int t;
    int dof;  // -1: value is zero (domain boundary side)
  };

  for (Side s : kSides) {
    int eidx = p_->iface.edge_of_side[sub_][int(s)];
    if (eidx < 0) continue;
    bool boundary = p_->iface.edges[eidx].boundary;
    double l_ij = boundary ? 1.0 : 2.0;
    double w = delta * rho / (l_ij * h);

    std::vector<Pt> own, other;
    for (const auto& sn : ref_.side_nodes[int(s)]) own.push_back({sn.t, sn.node});
    if (!boundary) {
      const auto& tn = trace_nodes_[int(s)];
      for (int q = 0; q < int(tn.size()); ++q)
        other.push_back({tn[q].t, trace_offset_[int(s)] + q});
    }

    // merged breakpoints
    std::vector<int> ts;
    for (const Pt& a : own) ts.push_back(a.t);
    for (const Pt& a : other) ts.push_back(a.t);
    ts.push_back(0);
    ts.push_back(6 * m);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    auto bracket = [](const std::vector<Pt>& pts, int ta, int tb, int out[2], double c0[2],
                      double c1[2]) {
      // hat coefficients of the two bracketing dofs at ta and tb
      int lo = 0;
      for (int q = 0; q < int(pts.size()); ++q)
        if (pts[q].t <= ta) lo = q;
      int hi = std::min(lo + 1, int(pts.size()) - 1);
      out[0] = pts[lo].dof;
      out[1] = pts[hi].dof;
      double span = double(pts[hi].t - pts[lo].t);
      if (span == 0.0) {
        c0[0] = 1.0; c0[1] = 0.0; c1[0] = 1.0; c1[1] = 0.0;
      } else {
        c0[0] = (pts[hi].t - ta) / span;
        c0[1] = (ta - pts[lo].t) / span;
        c1[0] = (pts[hi].t - tb) / span;
        c1[1] = (tb - pts[lo].t) / span;
      }
    };

    for (size_t seg = 0; seg + 1 < ts.size(); ++seg) {
      int ta = ts[seg], tb = ts[seg + 1];
      double len = (tb - ta) * h / 6.0;
      // active dofs and their (value at ta, value at tb) coefficients; trace sign -1
      int dof[4] = {-1, -1, -1, -1};
      double a0[4] = {0, 0, 0, 0}, a1[4] = {0, 0, 0, 0};
      int od[2];
      double oc0[2], oc1[2];
      bracket(own, ta, tb, od, oc0, oc1);
      dof[0] = od[0]; a0[0] = oc0[0]; a1[0] = oc1[0];
      dof[1] = od[1]; a0[1] = oc0[1]; a1[1] = oc1[1];
      if (!other.empty()) {
        bracket(other, ta, tb, od, oc0, oc1);
        dof[2] = od[0]; a0[2] = -oc0[0]; a1[2] = -oc1[0];
        dof[3] = od[1]; a0[3] = -oc0[1]; a1[3] = -oc1[1];
      }
      for (int aIdx = 0; aIdx < 4; ++aIdx) {
        if (dof[aIdx] < 0) continue;
        for (int bIdx = 0; bIdx < 4; ++bIdx) {
          if (dof[bIdx] < 0) continue;
          double val = w * len / 6.0 *
                       (2.0 * a0[aIdx] * a0[bIdx] + a0[aIdx] * a1[bIdx] + a1[aIdx] * a0[bIdx] +
                        2.0 * a1[aIdx] * a1[bIdx]);
          if (val != 0.0) trips.emplace_back(dof[aIdx], dof[bIdx], val);
        }
      }
    }
  }
  P_ref_.resize(n_total_, n_total_);
  P_ref_.setFromTriplets(trips.begin(), trips.end());
}

double RefinedSubdomain::side_trace_value(const Eigen::VectorXd& u_parent, Side s, int t) const {
  // Piecewise-linear trace copy along side s, evaluated with the C/V rules:
  // inside a fine edge take that edge's linear; at an interior breakpoint
  // average the two adjacent edges; at the macro endpoints take the edge limit.
  const int m = ref_.m;
  auto edge_value = [&](int k, int tt) {
    double v0 = u_parent[dofs_->trace_dof(s, k, 0)];
    double v1 = u_parent[dofs_->trace_dof(s, k, 1)];
    double lam = (tt - 6.0 * k) / 6.0;
    return (1.0 - lam) * v0 + lam * v1;
  };
  if (t == 0) return edge_value(0, 0);
  if (t == 6 * m) return edge_value(m - 1, 6 * m);
  if (t % 6 == 0) {
    int k = t / 6;
    return 0.5 * (edge_value(k - 1, t) + edge_value(k, t));
  }
  return edge_value(t / 6, t);
}

Eigen::VectorXd RefinedSubdomain::interp_forward(const Eigen::VectorXd& u_parent,
                                                 int edge_variant) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_total_);
  for (int id = 0; id < n_own(); ++id) {
    const RefinedMesh::Node& n = ref_.nodes[id];
    double acc = 0.0;
    for (int e : n.avg_elems) acc += eval_linear(parent_->elems[e], u_parent, e, n.pos);
    out[id] = acc / double(n.avg_elems.size());
  }
  if (edge_variant >= 0) {
    Side s = Side(edge_variant);
    const auto& list = ref_.side_nodes[int(s)];
    const int m = ref_.m;
    int first = list.front().node, last = list.back().node;
    int e0 = parent_->side_edges[int(s)][0].elem;
    int e1 = parent_->side_edges[int(s)][m - 1].elem;
    out[first] = eval_linear(parent_->elems[e0], u_parent, e0, ref_.nodes[first].pos);
    out[last] = eval_linear(parent_->elems[e1], u_parent, e1, ref_.nodes[last].pos);
  }
  for (Side s : kSides) {
    if (trace_offset_[int(s)] < 0) continue;
    const auto& tn = trace_nodes_[int(s)];
    for (int q = 0; q < int(tn.size()); ++q)
      out[trace_offset_[int(s)] + q] = side_trace_value(u_parent, s, tn[q].t);
  }
  return out;
}

Eigen::VectorXd RefinedSubdomain::interp_backward(const Eigen::VectorXd& u_refined) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs_->total);
  for (int e = 0; e < int(parent_->elems.size()); ++e) {
    const auto& cn = ref_.parent_cnodes[e];
    Tri ct;
    for (int k = 0; k < 3; ++k) {
      ct.v[k] = ref_.nodes[cn[k]].pos;
      ct.node[k] = cn[k];
    }
    for (int lv = 0; lv < 3; ++lv) {
      auto lam = barycentric(ct, parent_->elems[e].v[lv]);
      out[3 * e + lv] =
          lam[0] * u_refined[cn[0]] + lam[1] * u_refined[cn[1]] + lam[2] * u_refined[cn[2]];
    }
  }
  for (Side s : kSides) {
    if (trace_offset_[int(s)] < 0) continue;
    const auto& tn = trace_nodes_[int(s)];
    for (int k = 0; k < ref_.m; ++k) {
      const auto& pair = trace_edge_cnodes_[int(s)][k];
      double t0 = tn[pair[0]].t, t1 = tn[pair[1]].t;
      double v0 = u_refined[trace_offset_[int(s)] + pair[0]];
      double v1 = u_refined[trace_offset_[int(s)] + pair[1]];
      for (int end = 0; end < 2; ++end) {
        double t = 6.0 * k + 6.0 * end;
        double lam = (t - t0) / (t1 - t0);
        out[dofs_->trace_dof(s, k, end)] = (1.0 - lam) * v0 + lam * v1;
      }
    }
  }
  return out;
}

double RefinedSubdomain::parent_vol_energy(const Eigen::VectorXd& u) const {
  return u.dot(A_vol_par_ * u);
}
double RefinedSubdomain::parent_penalty(const Eigen::VectorXd& u) const {
  return u.dot(P_par_ * u);
}
double RefinedSubdomain::parent_d_energy(const Eigen::VectorXd& u) const {
  return u.dot(D_par_ * u);
}
double RefinedSubdomain::refined_vol_energy(const Eigen::VectorXd& u) const {
  return u.dot(A_vol_ref_ * u);
}
double RefinedSubdomain::refined_penalty(const Eigen::VectorXd& u) const {
  return u.dot(P_ref_ * u);
}
double RefinedSubdomain::refined_d_energy(const Eigen::VectorXd& u) const {
  return refined_vol_energy(u) + refined_penalty(u);
}

double RefinedSubdomain::parent_edge_jump_l2(const Eigen::VectorXd& u, Side s) const {
  const int m = ref_.m;
  bool has_trace = trace_offset_[int(s)] >= 0;
  double acc = 0.0;
  for (int k = 0; k < m; ++k) {
    double o0 = u[dofs_->own_side_dof(*parent_, s, k, 0)];
    double o1 = u[dofs_->own_side_dof(*parent_, s, k, 1)];
    double t0 = has_trace ? u[dofs_->trace_dof(s, k, 0)] : 0.0;
    double t1 = has_trace ? u[dofs_->trace_dof(s, k, 1)] : 0.0;
    double j0 = o0 - t0, j1 = o1 - t1;
    acc += parent_->h / 6.0 * (2.0 * j0 * j0 + 2.0 * j1 * j1 + 2.0 * j0 * j1);
  }
  return acc;
}

double RefinedSubdomain::refined_edge_jump_l2(const Eigen::VectorXd& u, Side s) const {
  const int m = ref_.m;
  std::vector<std::pair<int, double>> own, other;
  for (const auto& sn : ref_.side_nodes[int(s)]) own.push_back({sn.t, u[sn.node]});
  if (trace_offset_[int(s)] >= 0) {
    const auto& tn = trace_nodes_[int(s)];
    for (int q = 0; q < int(tn.size()); ++q)
      other.push_back({tn[q].t, u[trace_offset_[int(s)] + q]});
  } else {
    other.push_back({0, 0.0});
    other.push_back({6 * m, 0.0});
  }
  std::vector<int> ts;
  for (auto& a : own) ts.push_back(a.first);
  for (auto& a : other) ts.push_back(a.first);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  auto eval = [](const std::vector<std::pair<int, double>>& pts, double t) {
    int lo = 0;
    for (int q = 0; q < int(pts.size()); ++q)
      if (pts[q].first <= t) lo = q;
    int hi = std::min(lo + 1, int(pts.size()) - 1);
    if (pts[hi].first == pts[lo].first) return pts[lo].second;
    double lam = (t - pts[lo].first) / double(pts[hi].first - pts[lo].first);
    return (1.0 - lam) * pts[lo].second + lam * pts[hi].second;
  };
  double acc = 0.0;
  for (size_t seg = 0; seg + 1 < ts.size(); ++seg) {
    double len = (ts[seg + 1] - ts[seg]) * parent_->h / 6.0;
    double j0 = eval(own, ts[seg]) - eval(other, ts[seg]);
    double j1 = eval(own, ts[seg + 1]) - eval(other, ts[seg + 1]);
    acc += len / 6.0 * (2.0 * j0 * j0 + 2.0 * j1 * j1 + 2.0 * j0 * j1);
  }
  return acc;
}

Eigen::VectorXd RefinedSubdomain::harmonic_refined(const Eigen::VectorXd& u_refined) const {
  Eigen::VectorXd out = u_refined;
  if (free_.empty()) return out;
  Eigen::VectorXd ud(dirichlet_.size());
  for (size_t q = 0; q < dirichlet_.size(); ++q) ud[int(q)] = u_refined[dirichlet_[q]];
  Eigen::VectorXd uf = harm_fac_.solve(-(A_free_dir_ * ud));
  for (size_t q = 0; q < free_.size(); ++q) out[free_[q]] = uf[int(q)];
  return out;
}

Eigen::VectorXd RefinedSubdomain::harmonic_parent(const Eigen::VectorXd& u_parent) const {
  const SubdomainOperator& op = p_->feti->subop(sub_);
  Eigen::VectorXd ug(op.n_gamma());
  for (int q = 0; q < op.n_gamma(); ++q) ug[q] = u_parent[op.gamma()[q]];
  return op.harmonic_extend(ug);
}

}  // namespace fetidg

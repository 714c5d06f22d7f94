#include "fetidg/assembly.hpp"

#include <cmath>
#include <ostream>

namespace fetidg {

CoefficientField CoefficientField::constant(double rho) {
  CoefficientField c;
  c.pattern = Pattern::Constant;
  c.rho_const = rho;
  return c;
}

CoefficientField CoefficientField::checkerboard(double rho_black, double rho_red) {
  CoefficientField c;
  c.pattern = Pattern::Checkerboard;
  c.rho_black = rho_black;
  c.rho_red = rho_red;
  return c;
}

double CoefficientField::rho(const Partition& part, int sub) const {
  if (pattern == Pattern::Constant) return rho_const;
  return ((part.row(sub) + part.col(sub)) % 2 == 0) ? rho_black : rho_red;
}

namespace {

Vec2 rot_minus90(const Vec2& v) { return {v.y, -v.x}; }

/// Gradients of the three linear basis functions (constant per element).
std::array<Vec2, 3> basis_gradients(const Tri& t) {
  double inv2A = 1.0 / (2.0 * t.area());
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i)
    g[i] = inv2A * rot_minus90(t.v[(i + 1) % 3] - t.v[(i + 2) % 3]);
  return g;
}

/// Exact integral over a segment of length len of a product of two linear
/// functions given by endpoint values.
double edge_prod(double len, double a0, double a1, double b0, double b1) {
  return len / 6.0 * (2.0 * a0 * b0 + a0 * b1 + a1 * b0 + 2.0 * a1 * b1);
}

struct TripletSink {
  std::vector<Eigen::Triplet<double>> trips;
  void add(int r, int c, double v) {
    if (v != 0.0) trips.emplace_back(r, c, v);
  }
};

void add_interior_edge(const SubdomainMesh& mesh, const InteriorEdge& ie, double rho, double delta,
                       bool with_s, bool with_p, TripletSink& sink) {
  const Tri& ta = mesh.elems[ie.elem_a];
  const Tri& tb = mesh.elems[ie.elem_b];
  int na0 = ta.node[ie.edge_a], na1 = ta.node[(ie.edge_a + 1) % 3];
  Vec2 p0 = ta.v[ie.edge_a], p1 = ta.v[(ie.edge_a + 1) % 3];
  Vec2 tang = p1 - p0;
  double len = std::sqrt(dot(tang, tang));
  Vec2 n = {tang.y / len, -tang.x / len};  // outward from elem_a (CCW orientation)

  auto ga = basis_gradients(ta);
  auto gb = basis_gradients(tb);

  // Six edge dofs: 0-2 on elem_a, 3-5 on elem_b. Jump convention (w_a - w_b).
  double dn[6], v0[6], v1[6], sgn[6];
  int dof[6];
  for (int k = 0; k < 3; ++k) {
    dof[k] = 3 * ie.elem_a + k;
    dn[k] = dot(ga[k], n);
    v0[k] = (ta.node[k] == na0) ? 1.0 : 0.0;
    v1[k] = (ta.node[k] == na1) ? 1.0 : 0.0;
    sgn[k] = 1.0;
    dof[3 + k] = 3 * ie.elem_b + k;
    dn[3 + k] = dot(gb[k], n);
    v0[3 + k] = (tb.node[k] == na0) ? 1.0 : 0.0;
    v1[3 + k] = (tb.node[k] == na1) ? 1.0 : 0.0;
    sgn[3 + k] = -1.0;
  }
  for (int A = 0; A < 6; ++A) {
    double intA = 0.5 * len * (v0[A] + v1[A]);
    for (int B = 0; B < 6; ++B) {
      double val = 0.0;
      if (with_s) {
        double intB = 0.5 * len * (v0[B] + v1[B]);
        val -= 0.5 * rho * (dn[A] * sgn[B] * intB + dn[B] * sgn[A] * intA);
      }
      if (with_p)
        val += delta * rho / len * sgn[A] * sgn[B] * edge_prod(len, v0[A], v1[A], v0[B], v1[B]);
      sink.add(dof[A], dof[B], val);
    }
  }
}

/// Interface or boundary fine edge: one-sided flux from this subdomain,
/// jump against the neighbor's trace copy (or against u_d = 0).
void add_side_edge(const SubdomainMesh& mesh, const SubdomainDofs& dofs, Side side,
                   const BoundaryEdge& be, int k, double rho, double delta, double l_ij,
                   bool has_trace, bool with_s, bool with_p, TripletSink& sink) {
  const Tri& t = mesh.elems[be.elem];
  Vec2 n = mesh.outward_normal(side);
  double len = mesh.h;
  auto g = basis_gradients(t);

  int ndof = has_trace ? 5 : 3;
  double dn[5] = {0, 0, 0, 0, 0};
  double j0[5], j1[5];  // jump (u_i - u_j) endpoint values per basis
  int dof[5];
  for (int lv = 0; lv < 3; ++lv) {
    dof[lv] = 3 * be.elem + lv;
    dn[lv] = dot(g[lv], n);
    j0[lv] = (lv == be.lv0) ? 1.0 : 0.0;
    j1[lv] = (lv == be.lv1) ? 1.0 : 0.0;
  }
  if (has_trace) {
    dof[3] = dofs.trace_dof(side, k, 0);
    dof[4] = dofs.trace_dof(side, k, 1);
    j0[3] = -1.0;
    j1[3] = 0.0;
    j0[4] = 0.0;
    j1[4] = -1.0;
  }
  for (int A = 0; A < ndof; ++A) {
    double intJA = 0.5 * len * (j0[A] + j1[A]);  // int (u_j - u_i) of A is -intJA
    for (int B = 0; B < ndof; ++B) {
      double val = 0.0;
      if (with_s) {
        double intJB = 0.5 * len * (j0[B] + j1[B]);
        val += rho / l_ij * (dn[A] * -intJB + dn[B] * -intJA);
      }
      if (with_p) val += delta * rho / (l_ij * len) * edge_prod(len, j0[A], j1[A], j0[B], j1[B]);
      sink.add(dof[A], dof[B], val);
    }
  }
}

}  // namespace

Eigen::Matrix3d element_stiffness(const Tri& tri, double rho) {
  double area = tri.area();
  if (!(area > 0.0)) throw std::invalid_argument("element_stiffness: degenerate triangle");
  auto g = basis_gradients(tri);
  Eigen::Matrix3d K;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) K(i, j) = rho * area * dot(g[i], g[j]);
  return K;
}

Eigen::Vector3d element_load_const(const Tri& tri, double value) {
  return Eigen::Vector3d::Constant(value * tri.area() / 3.0);
}

Eigen::Vector3d element_load(const Tri& tri, const std::function<double(Vec2)>& f) {
  // 7-point degree-5 rule.
  static const double w1 = 0.225;
  static const double w2 = 0.1323941527885062;
  static const double w3 = 0.1259391805448271;
  static const double a2 = 0.0597158717897698, b2 = 0.4701420641051151;
  static const double a3 = 0.7974269853530873, b3 = 0.1012865073234563;
  const double bary[7][3] = {
      {1.0 / 3, 1.0 / 3, 1.0 / 3}, {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2},
      {a3, b3, b3},                {b3, a3, b3}, {b3, b3, a3}};
  const double wq[7] = {w1, w2, w2, w2, w3, w3, w3};
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  double area = tri.area();
  for (int q = 0; q < 7; ++q) {
    Vec2 p = bary[q][0] * tri.v[0] + bary[q][1] * (tri.v[1]) + bary[q][2] * (tri.v[2]);
    double fv = f(p);
    for (int lv = 0; lv < 3; ++lv) out[lv] += wq[q] * area * fv * bary[q][lv];
  }
  return out;
}

LocalStiffness assemble_local(const Partition& part, const std::vector<SubdomainMesh>& meshes,
                              const Interface& iface, const SubdomainDofs& dofs,
                              const CoefficientField& coeff, const PenaltyParams& penalty,
                              unsigned parts) {
  const SubdomainMesh& mesh = meshes[dofs.sub];
  const double rho = coeff.rho(part, dofs.sub);

  LocalStiffness out;
  out.sub = dofs.sub;
  TripletSink sink;

  if (parts & kVolume) {
    for (int e = 0; e < int(mesh.elems.size()); ++e) {
      Eigen::Matrix3d K = element_stiffness(mesh.elems[e], rho);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) sink.add(3 * e + i, 3 * e + j, K(i, j));
    }
  }

  if (parts & (kInteriorS | kInteriorP))
    for (const InteriorEdge& ie : mesh.interior_edges)
      add_interior_edge(mesh, ie, rho, penalty.delta, parts & kInteriorS, parts & kInteriorP, sink);

  for (Side s : kSides) {
    int e = iface.edge_of_side[dofs.sub][int(s)];
    if (e < 0) continue;
    bool boundary = iface.edges[e].boundary;
    bool with_s = boundary ? (parts & kBoundaryS) : (parts & kInterfaceS);
    bool with_p = boundary ? (parts & kBoundaryP) : (parts & kInterfaceP);
    if (!with_s && !with_p) continue;
    double l_ij = boundary ? 1.0 : 2.0;
    const auto& edges = mesh.side_edges[int(s)];
    for (int k = 0; k < int(edges.size()); ++k)
      add_side_edge(mesh, dofs, s, edges[k], k, rho, penalty.delta, l_ij, !boundary, with_s,
                    with_p, sink);
  }

  out.A.resize(dofs.total, dofs.total);
  out.A.setFromTriplets(sink.trips.begin(), sink.trips.end());
  out.load = Eigen::VectorXd::Zero(dofs.total);
  for (int e = 0; e < int(mesh.elems.size()); ++e) {
    Eigen::Vector3d le = element_load_const(mesh.elems[e], 1.0);
    for (int lv = 0; lv < 3; ++lv) out.load[3 * e + lv] = le[lv];
  }
  return out;
}

void assemble_load(const SubdomainMesh& mesh, const std::function<double(Vec2)>& f,
                   Eigen::VectorXd& load) {
  load.setZero();
  for (int e = 0; e < int(mesh.elems.size()); ++e) {
    Eigen::Vector3d le = element_load(mesh.elems[e], f);
    for (int lv = 0; lv < 3; ++lv) load[3 * e + lv] = le[lv];
  }
}

GlobalIndexer::GlobalIndexer(const SpaceMaps& maps) {
  own_offset.resize(maps.subs.size() + 1, 0);
  for (size_t s = 0; s < maps.subs.size(); ++s)
    own_offset[s + 1] = own_offset[s] + maps.subs[s].own_count;
  n_global = own_offset.back();
}

int GlobalIndexer::operator()(int sub, int local, const SpaceMaps& maps) const {
  const SubdomainDofs& d = maps.subs[sub];
  if (local < d.own_count) return own_offset[sub] + local;
  auto [nbr, src] = d.trace_source[local - d.own_count];
  return own_offset[nbr] + src;
}

SpMat assemble_global(const std::vector<LocalStiffness>& locals, const SpaceMaps& maps) {
  GlobalIndexer gi(maps);
  std::vector<Eigen::Triplet<double>> trips;
  for (const LocalStiffness& ls : locals) {
    for (int col = 0; col < ls.A.outerSize(); ++col) {
      int gc = gi(ls.sub, col, maps);
      for (SpMat::InnerIterator it(ls.A, col); it; ++it)
        trips.emplace_back(gi(ls.sub, int(it.row()), maps), gc, it.value());
    }
  }
  SpMat A(gi.n_global, gi.n_global);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

Eigen::VectorXd assemble_global_load(const std::vector<LocalStiffness>& locals,
                                     const SpaceMaps& maps) {
  GlobalIndexer gi(maps);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(gi.n_global);
  for (const LocalStiffness& ls : locals) {
    int n_own = maps.subs[ls.sub].own_count;
    for (int i = 0; i < n_own; ++i) f[gi.own_offset[ls.sub] + i] = ls.load[i];
  }
  return f;
}

double d_energy(const std::vector<SpMat>& d_forms, const std::vector<Eigen::VectorXd>& u) {
  double e = 0.0;
  for (size_t i = 0; i < d_forms.size(); ++i) e += u[i].dot(d_forms[i] * u[i]);
  return e;
}

void write_triplets(std::ostream& os, const SpMat& A) {
  for (int col = 0; col < A.outerSize(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace fetidg

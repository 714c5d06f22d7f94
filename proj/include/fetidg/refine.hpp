#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "fetidg/problem.hpp"

namespace fetidg {

/// Auxiliary conforming refinement of a subdomain triangulation. Each parent
/// element is split according to how many of its edges lie on the subdomain
/// boundary (10 / 7 / 4 / 1 children); nodes are typed C, M or V. All node
/// coordinates are integers on the lattice of spacing h/6, which keeps
/// interface breakpoints exact.
struct RefinedMesh {
  int sub = -1;
  int m = 0;

  struct Node {
    int tx = 0, ty = 0;  // position in h/6 units from the subdomain origin
    Vec2 pos;
    char type = '?';  // 'C', 'M' or 'V'
    std::vector<int> avg_elems;  // parent elements averaged by the forward map
  };
  std::vector<Node> nodes;

  std::vector<std::array<int, 3>> children;       // refined triangles (node ids)
  std::vector<int> child_parent;                  // parent element per child
  std::vector<std::array<int, 3>> parent_cnodes;  // the 3 C nodes of each parent

  struct SideNode {
    int t = 0;  // position along the side in h/6 units, ascending
    int node = -1;
  };
  std::array<std::vector<SideNode>, 4> side_nodes;
  /// Per side, per parent fine edge: its two C nodes in ascending order.
  std::array<std::vector<std::array<int, 2>>, 4> edge_cnodes;
};

RefinedMesh refine_subdomain(const SubdomainMesh& mesh);

/// Verification bundle for one extended subdomain: the refined space
/// W_i(Omega'_i) underline, the forward/backward interpolators, the refined
/// bilinear forms and both discrete harmonic extensions.
///
/// Refined dof layout: own refined nodes first, then one block per interior
/// side holding the neighbor-side refined edge nodes (continuous 1D trace).
class RefinedSubdomain {
 public:
  RefinedSubdomain(const Problem& p, int sub);

  int n_own() const { return int(ref_.nodes.size()); }
  int n_total() const { return n_total_; }
  int parent_dim() const { return dofs_->total; }
  const RefinedMesh& mesh() const { return ref_; }

  /// Forward interpolation; `edge_variant` selects the one-sided edge-limit
  /// override at the endpoints of that side's macro edge (-1: plain).
  Eigen::VectorXd interp_forward(const Eigen::VectorXd& u_parent, int edge_variant = -1) const;
  /// Backward interpolation (linear extrapolation through C nodes).
  Eigen::VectorXd interp_backward(const Eigen::VectorXd& u_refined) const;

  double parent_vol_energy(const Eigen::VectorXd& u_parent) const;
  double parent_penalty(const Eigen::VectorXd& u_parent) const;      // p_{i,d}
  double parent_d_energy(const Eigen::VectorXd& u_parent) const;     // d_i
  double refined_vol_energy(const Eigen::VectorXd& u_refined) const;
  double refined_penalty(const Eigen::VectorXd& u_refined) const;
  double refined_d_energy(const Eigen::VectorXd& u_refined) const;

  /// Squared L2 norm of the jump (own trace minus copy) on one macro edge.
  double parent_edge_jump_l2(const Eigen::VectorXd& u_parent, Side s) const;
  double refined_edge_jump_l2(const Eigen::VectorXd& u_refined, Side s) const;

  /// Discrete harmonic extension in the refined space: volume-harmonic with
  /// Dirichlet data on the Gamma_i nodes (trace blocks pass through).
  Eigen::VectorXd harmonic_refined(const Eigen::VectorXd& u_refined) const;
  /// DG-sense harmonic extension of parent interface data (full local vector).
  Eigen::VectorXd harmonic_parent(const Eigen::VectorXd& u_parent) const;

  bool side_is_interface(Side s) const { return trace_offset_[int(s)] >= 0; }

 private:
  const Problem* p_;
  int sub_;
  const SubdomainDofs* dofs_;
  const SubdomainMesh* parent_;
  RefinedMesh ref_;

  std::array<int, 4> trace_offset_ = {-1, -1, -1, -1};
  std::array<std::vector<RefinedMesh::SideNode>, 4> trace_nodes_;  // neighbor-side geometry
  std::array<std::vector<std::array<int, 2>>, 4> trace_edge_cnodes_;
  int n_total_ = 0;

  SpMat A_vol_ref_;   // refined volume form (own block)
  SpMat P_ref_;       // refined interface+boundary penalty (all dofs)
  SpMat A_vol_par_;   // parent volume form
  SpMat P_par_;       // parent p_{i,d}
  SpMat D_par_;       // parent d_i

  std::vector<int> dirichlet_;  // own refined nodes on Gamma_i
  std::vector<int> free_;
  std::vector<int> node_role_;  // -1 dirichlet, else index into free_
  Eigen::SimplicialLDLT<SpMat> harm_fac_;
  SpMat A_free_dir_;

  double side_trace_value(const Eigen::VectorXd& u_parent, Side s, int t) const;
  void build_penalty_form();
};

}  // namespace fetidg

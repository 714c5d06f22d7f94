#pragma once

#include <memory>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "fetidg/assembly.hpp"
#include "fetidg/subdomain.hpp"

namespace fetidg {

/// Block vector over the subassembled space: interior, primal, dual.
struct TildeVec {
  Eigen::VectorXd I, P, D;

  static TildeVec zero(int nI, int nP, int nD) {
    return {Eigen::VectorXd::Zero(nI), Eigen::VectorXd::Zero(nP), Eigen::VectorXd::Zero(nD)};
  }
};

/// Exact solver for the subassembled matrix A-tilde via block elimination:
/// per-subdomain factorizations of the (I_i, Delta_i) blocks and a dense
/// coarse Schur complement on the primal unknowns.
///
/// Extracting the Delta component of apply_inverse((0, 0, r_D)) realizes
/// the inverse of the dual Schur complement S-tilde.
class TildeSolver {
 public:
  TildeSolver(const SpaceMaps& maps, const std::vector<LocalStiffness>& locals);

  TildeVec apply_inverse(const TildeVec& r) const;
  Eigen::VectorXd apply_stilde_inv(const Eigen::VectorXd& r_delta) const;
  /// A-tilde times a block vector (verification use).
  TildeVec multiply(const TildeVec& u) const;

  int n_I() const { return maps_->n_I; }
  int n_P() const { return maps_->n_P; }
  int n_D() const { return maps_->n_D; }
  const Eigen::MatrixXd& coarse_schur() const { return coarse_; }

 private:
  const SpaceMaps* maps_;
  const std::vector<LocalStiffness>* locals_;

  struct LocalBlock {
    std::vector<int> k_dofs;         // interior then delta local ids
    std::vector<int> groups;         // global primal groups touching this subdomain
    std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> K;  // factor of A'_i restricted to k_dofs
    Eigen::MatrixXd E;               // coupling K x local primal
    Eigen::MatrixXd KinvE;
    SpMat K_mat;
  };
  std::vector<LocalBlock> blocks_;
  Eigen::MatrixXd coarse_;
  Eigen::LDLT<Eigen::MatrixXd> coarse_fac_;

  void gather_local(int sub, const TildeVec& g, Eigen::VectorXd& rk) const;
  void scatter_local(int sub, const Eigen::VectorXd& uk, TildeVec& out) const;
};

/// Inverse of the (I, Pi) block of A-tilde: per-subdomain interior solves
/// (borrowed from the SubdomainOperators) plus its own coarse complement.
/// Needed to apply S-tilde forward and to form the dual right-hand side.
class IpSolver {
 public:
  IpSolver(const SpaceMaps& maps, const std::vector<LocalStiffness>& locals,
           const std::vector<std::unique_ptr<SubdomainOperator>>& subops);

  void solve(const Eigen::VectorXd& r_I, const Eigen::VectorXd& r_P, Eigen::VectorXd& u_I,
             Eigen::VectorXd& u_P) const;

 private:
  const SpaceMaps* maps_;
  const std::vector<std::unique_ptr<SubdomainOperator>>* subops_;
  struct LocalBlock {
    std::vector<int> groups;
    Eigen::MatrixXd E;      // n_I x local primal
    Eigen::MatrixXd AinvE;  // A_II^{-1} E
  };
  std::vector<LocalBlock> blocks_;
  Eigen::MatrixXd coarse_;
  Eigen::LDLT<Eigen::MatrixXd> coarse_fac_;
};

/// The dual FETI-DP system: jump matrix B, rho^beta scaling, operator
/// F = B Stilde^{-1} B^T, preconditioner M^{-1} = B_D S'_Delta B_D^T,
/// right-hand side and solution recovery.
class FetiDpSystem {
 public:
  FetiDpSystem(const Partition& part, const std::vector<SubdomainMesh>& meshes,
               const Interface& iface, const SpaceMaps& maps, const CoefficientField& coeff,
               const PenaltyParams& penalty, double beta);

  int n_mult() const { return maps_->n_mult(); }

  Eigen::VectorXd apply_B(const Eigen::VectorXd& u_delta) const;
  Eigen::VectorXd apply_BT(const Eigen::VectorXd& lambda) const;
  /// P_Delta = B_D^T B.
  Eigen::VectorXd apply_P(const Eigen::VectorXd& w_delta) const;
  Eigen::VectorXd apply_F(const Eigen::VectorXd& lambda) const;
  Eigen::VectorXd apply_Minv(const Eigen::VectorXd& mu) const;
  /// S'_Delta (block diagonal of the corner-deleted local Schur complements).
  Eigen::VectorXd apply_Sprime_delta(const Eigen::VectorXd& u_delta) const;
  /// S-tilde forward: eliminate (I, Pi) against the given dual values.
  Eigen::VectorXd apply_stilde(const Eigen::VectorXd& u_delta) const;
  Eigen::VectorXd apply_stilde_inv(const Eigen::VectorXd& r_delta) const {
    return tilde_->apply_stilde_inv(r_delta);
  }

  const TildeVec& f_tilde() const { return f_tilde_; }
  /// Dual right-hand side g-tilde (condensed loads).
  Eigen::VectorXd g_tilde_delta() const;
  /// g = B Stilde^{-1} g-tilde.
  Eigen::VectorXd rhs_g() const;

  struct Solution {
    Eigen::VectorXd x;       // global DG vector on X(Omega)
    TildeVec blocks;         // (u_I, u_Pi, u_Delta)
    double jump_norm = 0.0;  // ||B u_Delta||_2
  };
  Solution recover(const Eigen::VectorXd& lambda) const;

  /// Extended local vector of subdomain `sub` from subassembled blocks.
  Eigen::VectorXd local_vector(int sub, const TildeVec& u) const;

  const TildeSolver& tilde() const { return *tilde_; }
  const SubdomainOperator& subop(int sub) const { return *subops_[sub]; }
  const std::vector<LocalStiffness>& locals() const { return locals_; }
  const SpaceMaps& maps() const { return *maps_; }
  /// Scaling weight of each dual dof of `sub` (rho_j^beta / (rho_i^beta + rho_j^beta)).
  const Eigen::VectorXd& scaling(int sub) const { return scaling_[sub]; }
  double beta() const { return beta_; }

 private:
  const SpaceMaps* maps_;
  double beta_;
  std::vector<LocalStiffness> locals_;
  std::vector<std::unique_ptr<SubdomainOperator>> subops_;
  std::unique_ptr<TildeSolver> tilde_;
  std::unique_ptr<IpSolver> ip_;
  std::vector<Eigen::VectorXd> scaling_;
  TildeVec f_tilde_;
};

}  // namespace fetidg

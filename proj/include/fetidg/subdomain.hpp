#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "fetidg/assembly.hpp"
#include "fetidg/dof_space.hpp"

namespace fetidg {

/// Elimination machinery for one extended subdomain: factorization of the
/// interior block, the Schur complement S'_i as an operator, the discrete
/// harmonic extension, and the corner-deleted S'_{i,Delta}.
///
/// Factors are immutable after construction; applications on distinct
/// subdomains may run concurrently.
class SubdomainOperator {
 public:
  SubdomainOperator(const SubdomainDofs& dofs, const SpMat& A_full);

  int n_total() const { return n_total_; }
  int n_interior() const { return int(interior_.size()); }
  int n_gamma() const { return int(gamma_.size()); }
  int n_delta() const { return int(delta_gpos_.size()); }

  /// Local ids of the Gamma'_i dofs, ascending.
  const std::vector<int>& gamma() const { return gamma_; }
  /// Positions of the Delta_i dofs within gamma().
  const std::vector<int>& delta_gpos() const { return delta_gpos_; }

  Eigen::VectorXd solve_interior(const Eigen::VectorXd& b) const;

  /// S'_i v = A_GG v - A_GI (A_II)^{-1} A_IG v (one interior solve).
  Eigen::VectorXd apply_schur(const Eigen::VectorXd& u_gamma) const;

  /// S'_{i,Delta}: S'_i with corner rows and columns deleted.
  Eigen::VectorXd apply_schur_delta(const Eigen::VectorXd& u_delta) const;

  /// Full local vector (w_I, u_gamma) with w_I = -(A_II)^{-1} A_IG u_gamma.
  Eigen::VectorXd harmonic_extend(const Eigen::VectorXd& u_gamma) const;

  /// a'_i(u, u) for a full local vector.
  double energy(const Eigen::VectorXd& u_full) const { return u_full.dot(A_full_ * u_full); }

  /// Dense S'_i, for verification only.
  Eigen::MatrixXd dense_schur() const;

  const SpMat& A_full() const { return A_full_; }
  const SpMat& A_II() const { return A_II_; }
  const SpMat& A_IG() const { return A_IG_; }
  const SpMat& A_GI() const { return A_GI_; }
  const SpMat& A_GG() const { return A_GG_; }

 private:
  int n_total_ = 0;
  std::vector<int> interior_;
  std::vector<int> gamma_;
  std::vector<int> delta_gpos_;
  SpMat A_full_, A_II_, A_IG_, A_GI_, A_GG_;
  Eigen::SimplicialLDLT<SpMat> II_;
};

}  // namespace fetidg

#pragma once

#include <functional>

#include <Eigen/Dense>

#include "fetidg/problem.hpp"

namespace fetidg {

/// Reference direct solution of A x = f (sparse Cholesky); throws when the
/// matrix is singular (penalty below the coercivity threshold).
Eigen::VectorXd direct_solve(const SpMat& A, const Eigen::VectorXd& f);

/// Dense form of a linear operator by columnwise application.
Eigen::MatrixXd dense_operator(int n, const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op);

struct Spectrum {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  Eigen::VectorXd eigenvalues;
};

/// Exact spectrum of the preconditioned dual operator M^{-1} F via dense
/// assembly of both operators (verification instances only).
Spectrum dense_preconditioned_spectrum(const FetiDpSystem& feti);

/// Eigenvalues (real parts) of the dense projection P_Delta.
Eigen::VectorXd dense_projection_spectrum(const FetiDpSystem& feti);

/// Assembled interface Schur system: S-hat u_Gamma = g-hat over the own
/// interface dofs of X(Gamma); a second algebraic route to the solution.
struct SchurPath {
  std::vector<int> gamma_global;  // global own-dof ids forming X(Gamma)
  Eigen::MatrixXd S_hat;
  Eigen::VectorXd g_hat;
};
SchurPath assemble_schur_path(const Problem& p);

/// Full-pipeline residual of a candidate solution: ||f - A x|| / ||f||.
double global_residual(const Problem& p, const Eigen::VectorXd& x);

/// Global stiffness and constant-one load of the instance.
struct GlobalSystem {
  SpMat A;
  Eigen::VectorXd f;
};
GlobalSystem assemble_global_system(const Problem& p);

/// L2 error of the SIPDG solution against u = sin(pi x) sin(pi y) with the
/// matching source, rho = 1 (manufactured-solution convergence checks).
double mms_l2_error(int M, int m, double delta);

}  // namespace fetidg

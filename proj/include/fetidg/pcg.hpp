#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace fetidg {

struct PcgConfig {
  double tol = 1e-10;  // reduction of the unpreconditioned l2 residual
  int max_iters = 500;
  bool estimate_condition = true;
  bool preconditioned_residual = false;  // stop on ||z||-based residual instead
};

struct PcgReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;  // ||r_k||_2, k = 0..iterations
  std::vector<double> alphas;
  std::vector<double> betas;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  double cond = 1.0;
  bool cond_degenerate = false;  // fewer than 2 iterations recorded
};

using LinOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Preconditioned conjugate gradients for F x = g with SPD F and M^{-1}.
/// Non-convergence is reported, not thrown.
std::pair<Eigen::VectorXd, PcgReport> pcg(const LinOp& apply_F, const LinOp& apply_Minv,
                                          const Eigen::VectorXd& g, const PcgConfig& config);

/// All eigenvalues of a symmetric tridiagonal matrix (diag d, off-diagonal e)
/// by bisection with Sturm sequence counts.
std::vector<double> tridiag_eigenvalues(const std::vector<double>& d, const std::vector<double>& e);

/// Extreme Ritz values of the preconditioned operator from the CG
/// coefficients; fills lambda_min/lambda_max/cond of the report.
void lanczos_condition(PcgReport& report);

/// Ritz extremes using only the first k CG steps.
std::pair<double, double> ritz_extremes(const PcgReport& report, int k);

/// CSV export: iteration, residual, current condition estimate.
void write_residual_history(std::ostream& os, const PcgReport& report);

}  // namespace fetidg

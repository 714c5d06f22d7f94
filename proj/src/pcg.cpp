#include "fetidg/pcg.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fetidg {

std::pair<Eigen::VectorXd, PcgReport> pcg(const LinOp& apply_F, const LinOp& apply_Minv,
                                          const Eigen::VectorXd& g, const PcgConfig& config) {
  if (!(config.tol > 0.0 && config.tol < 1.0)) throw std::invalid_argument("pcg: bad tolerance");
  if (config.max_iters < 1) throw std::invalid_argument("pcg: max_iters must be >= 1");

  const int n = int(g.size());
  PcgReport rep;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = g;
  double r0_norm = r.norm();
  rep.residuals.push_back(r0_norm);
  if (r0_norm == 0.0) {
    rep.converged = true;
    rep.cond_degenerate = true;
    return {x, rep};
  }

  Eigen::VectorXd z = apply_Minv(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  if (rz <= 0.0) throw std::runtime_error("pcg: preconditioner is not positive definite");
  const double rz0 = rz;

  const double target = config.tol * r0_norm;
  for (int k = 0; k < config.max_iters; ++k) {
    Eigen::VectorXd Fp = apply_F(p);
    double pFp = p.dot(Fp);
    if (pFp <= 0.0) throw std::runtime_error("pcg: operator is not positive definite");
    double alpha = rz / pFp;
    x += alpha * p;
    r -= alpha * Fp;
    rep.alphas.push_back(alpha);
    ++rep.iterations;

    Eigen::VectorXd z_new = apply_Minv(r);
    double rz_new = r.dot(z_new);
    double beta = rz_new / rz;
    rep.betas.push_back(beta);
    rep.residuals.push_back(r.norm());

    bool done = config.preconditioned_residual
                    ? std::sqrt(std::max(rz_new, 0.0)) <= config.tol * std::sqrt(rz0)
                    : r.norm() <= target;
    if (done) {
      rep.converged = true;
      break;
    }
    rz = rz_new;
    z = z_new;
    p = z + beta * p;
  }
  rep.betas.resize(rep.alphas.size() > 0 ? rep.alphas.size() - 1 : 0);
  if (config.estimate_condition) lanczos_condition(rep);
  return {x, rep};
}

namespace {

/// Number of eigenvalues of the tridiagonal strictly below x (Sturm count).
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int count = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min();
  for (size_t i = 0; i < d.size(); ++i) {
    double off = (i == 0) ? 0.0 : e[i - 1];
    q = d[i] - x - (i == 0 ? 0.0 : off * off / q);
    if (std::abs(q) < tiny) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double bisect_kth(const std::vector<double>& d, const std::vector<double>& e, int k, double lo,
                  double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) <= k)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> tridiag_eigenvalues(const std::vector<double>& d, const std::vector<double>& e) {
  const int n = int(d.size());
  if (n == 0) return {};
  if (int(e.size()) != n - 1) throw std::invalid_argument("tridiag_eigenvalues: size mismatch");
  double lo = d[0], hi = d[0];
  for (int i = 0; i < n; ++i) {
    double rad = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i < n - 1 ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - rad);
    hi = std::max(hi, d[i] + rad);
  }
  lo -= 1e-12 * std::max(1.0, std::abs(lo));
  hi += 1e-12 * std::max(1.0, std::abs(hi));
  std::vector<double> eig(n);
  for (int k = 0; k < n; ++k) eig[k] = bisect_kth(d, e, k, lo, hi);
  return eig;
}

std::pair<double, double> ritz_extremes(const PcgReport& report, int k) {
  k = std::min<int>(k, int(report.alphas.size()));
  if (k <= 0) return {1.0, 1.0};
  std::vector<double> d(k), e(k > 1 ? k - 1 : 0);
  for (int i = 0; i < k; ++i) {
    d[i] = 1.0 / report.alphas[i];
    if (i > 0) d[i] += report.betas[i - 1] / report.alphas[i - 1];
    if (i < k - 1) e[i] = std::sqrt(std::max(report.betas[i], 0.0)) / report.alphas[i];
  }
  std::vector<double> eig = tridiag_eigenvalues(d, e);
  return {eig.front(), eig.back()};
}

void lanczos_condition(PcgReport& report) {
  const int k = int(report.alphas.size());
  if (k == 0) {
    report.lambda_min = report.lambda_max = report.cond = 1.0;
    report.cond_degenerate = true;
    return;
  }
  auto [lmin, lmax] = ritz_extremes(report, k);
  report.lambda_min = lmin;
  report.lambda_max = lmax;
  report.cond = lmax / lmin;
  report.cond_degenerate = (k < 2);
}

void write_residual_history(std::ostream& os, const PcgReport& report) {
  os << "iteration,residual,cond_estimate\n";
  for (size_t i = 0; i < report.residuals.size(); ++i) {
    auto [lmin, lmax] = ritz_extremes(report, int(i));
    os << i << ',' << report.residuals[i] << ',' << (i == 0 ? 1.0 : lmax / lmin) << '\n';
  }
}

}  // namespace fetidg

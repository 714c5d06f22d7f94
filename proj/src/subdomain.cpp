#include "fetidg/subdomain.hpp"

#include <stdexcept>

namespace fetidg {

SubdomainOperator::SubdomainOperator(const SubdomainDofs& dofs, const SpMat& A_full)
    : n_total_(dofs.total), A_full_(A_full) {
  interior_ = dofs.interior;
  gamma_.reserve(dofs.total - interior_.size());
  std::vector<int> gpos(dofs.total, -1);
  for (int i = 0; i < dofs.total; ++i)
    if (dofs.interior_pos[i] < 0) {
      gpos[i] = int(gamma_.size());
      gamma_.push_back(i);
    }
  delta_gpos_.reserve(dofs.delta.size());
  for (int d : dofs.delta) delta_gpos_.push_back(gpos[d]);

  const int nI = int(interior_.size()), nG = int(gamma_.size());
  std::vector<int> where(dofs.total);  // >=0: interior pos, <0: -(gamma pos)-1
  for (int i = 0; i < dofs.total; ++i)
    where[i] = dofs.interior_pos[i] >= 0 ? dofs.interior_pos[i] : -gpos[i] - 1;

  std::vector<Eigen::Triplet<double>> tII, tIG, tGI, tGG;
  for (int col = 0; col < A_full.outerSize(); ++col) {
    for (SpMat::InnerIterator it(A_full, col); it; ++it) {
      int r = where[it.row()], c = where[col];
      if (r >= 0 && c >= 0)
        tII.emplace_back(r, c, it.value());
      else if (r >= 0)
        tIG.emplace_back(r, -c - 1, it.value());
      else if (c >= 0)
        tGI.emplace_back(-r - 1, c, it.value());
      else
        tGG.emplace_back(-r - 1, -c - 1, it.value());
    }
  }
  A_II_.resize(nI, nI);
  A_II_.setFromTriplets(tII.begin(), tII.end());
  A_IG_.resize(nI, nG);
  A_IG_.setFromTriplets(tIG.begin(), tIG.end());
  A_GI_.resize(nG, nI);
  A_GI_.setFromTriplets(tGI.begin(), tGI.end());
  A_GG_.resize(nG, nG);
  A_GG_.setFromTriplets(tGG.begin(), tGG.end());

  if (nI > 0) {
    II_.compute(A_II_);
    if (II_.info() != Eigen::Success || II_.vectorD().minCoeff() <= 0.0)
      throw std::runtime_error("SubdomainOperator: interior block is not SPD");
  }
}

Eigen::VectorXd SubdomainOperator::solve_interior(const Eigen::VectorXd& b) const {
  if (n_interior() == 0) return Eigen::VectorXd(0);
  return II_.solve(b);
}

Eigen::VectorXd SubdomainOperator::apply_schur(const Eigen::VectorXd& u_gamma) const {
  if (u_gamma.size() != n_gamma())
    throw std::invalid_argument("apply_schur: dimension mismatch");
  Eigen::VectorXd y = A_GG_ * u_gamma;
  if (n_interior() > 0) y -= A_GI_ * II_.solve(A_IG_ * u_gamma);
  return y;
}

Eigen::VectorXd SubdomainOperator::apply_schur_delta(const Eigen::VectorXd& u_delta) const {
  Eigen::VectorXd ug = Eigen::VectorXd::Zero(n_gamma());
  for (int p = 0; p < n_delta(); ++p) ug[delta_gpos_[p]] = u_delta[p];
  Eigen::VectorXd yg = apply_schur(ug);
  Eigen::VectorXd y(n_delta());
  for (int p = 0; p < n_delta(); ++p) y[p] = yg[delta_gpos_[p]];
  return y;
}

Eigen::VectorXd SubdomainOperator::harmonic_extend(const Eigen::VectorXd& u_gamma) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(n_total_);
  if (n_interior() > 0) {
    Eigen::VectorXd wI = -II_.solve(A_IG_ * u_gamma);
    for (size_t p = 0; p < interior_.size(); ++p) full[interior_[p]] = wI[p];
  }
  for (size_t p = 0; p < gamma_.size(); ++p) full[gamma_[p]] = u_gamma[p];
  return full;
}

Eigen::MatrixXd SubdomainOperator::dense_schur() const {
  Eigen::MatrixXd S(n_gamma(), n_gamma());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n_gamma());
  for (int c = 0; c < n_gamma(); ++c) {
    e[c] = 1.0;
    S.col(c) = apply_schur(e);
    e[c] = 0.0;
  }
  return S;
}

}  // namespace fetidg

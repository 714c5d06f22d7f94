#include "fetidg/fetidp.hpp"

#include <cmath>
#include <stdexcept>

namespace fetidg {

TildeSolver::TildeSolver(const SpaceMaps& maps, const std::vector<LocalStiffness>& locals)
    : maps_(&maps), locals_(&locals) {
  const int nsub = int(maps.subs.size());
  blocks_.resize(nsub);
  Eigen::MatrixXd App = Eigen::MatrixXd::Zero(maps.n_P, maps.n_P);

  for (int sub = 0; sub < nsub; ++sub) {
    const SubdomainDofs& d = maps.subs[sub];
    LocalBlock& blk = blocks_[sub];
    blk.k_dofs = d.interior;
    blk.k_dofs.insert(blk.k_dofs.end(), d.delta.begin(), d.delta.end());

    std::vector<int> kpos(d.total, -1), ppos(d.total, -1);
    for (int p = 0; p < int(blk.k_dofs.size()); ++p) kpos[blk.k_dofs[p]] = p;
    for (int v : d.vprime) {
      int g = maps.refs[sub][v].idx;
      int local_g = -1;
      for (int q = 0; q < int(blk.groups.size()); ++q)
        if (blk.groups[q] == g) local_g = q;
      if (local_g < 0) {
        local_g = int(blk.groups.size());
        blk.groups.push_back(g);
      }
      ppos[v] = local_g;
    }

    const int nK = int(blk.k_dofs.size()), nP = int(blk.groups.size());
    std::vector<Eigen::Triplet<double>> tK;
    blk.E = Eigen::MatrixXd::Zero(nK, nP);
    const SpMat& A = locals[sub].A;
    for (int col = 0; col < A.outerSize(); ++col) {
      for (SpMat::InnerIterator it(A, col); it; ++it) {
        int r = int(it.row());
        if (kpos[r] >= 0 && kpos[col] >= 0)
          tK.emplace_back(kpos[r], kpos[col], it.value());
        else if (kpos[r] >= 0 && ppos[col] >= 0)
          blk.E(kpos[r], ppos[col]) += it.value();
        else if (ppos[r] >= 0 && ppos[col] >= 0)
          App(blk.groups[ppos[r]], blk.groups[ppos[col]]) += it.value();
      }
    }
    blk.K_mat.resize(nK, nK);
    blk.K_mat.setFromTriplets(tK.begin(), tK.end());
    if (nK > 0) {
      blk.K = std::make_unique<Eigen::SimplicialLDLT<SpMat>>(blk.K_mat);
      if (blk.K->info() != Eigen::Success || blk.K->vectorD().minCoeff() <= 0.0)
        throw std::runtime_error("TildeSolver: local (I,Delta) block is not SPD");
      blk.KinvE = blk.K->solve(blk.E);
    } else {
      blk.KinvE = blk.E;
    }
  }

  coarse_ = App;
  for (int sub = 0; sub < nsub; ++sub) {
    const LocalBlock& blk = blocks_[sub];
    if (blk.k_dofs.empty() || blk.groups.empty()) continue;
    Eigen::MatrixXd contrib = blk.E.transpose() * blk.KinvE;
    for (int a = 0; a < int(blk.groups.size()); ++a)
      for (int b = 0; b < int(blk.groups.size()); ++b)
        coarse_(blk.groups[a], blk.groups[b]) -= contrib(a, b);
  }
  if (maps.n_P > 0) {
    coarse_fac_.compute(coarse_);
    if (coarse_fac_.info() != Eigen::Success || (coarse_fac_.vectorD().array() <= 0.0).any())
      throw std::runtime_error("TildeSolver: coarse primal problem is singular");
  }
}

void TildeSolver::gather_local(int sub, const TildeVec& g, Eigen::VectorXd& rk) const {
  const SubdomainDofs& d = maps_->subs[sub];
  const int nI = int(d.interior.size()), nD = int(d.delta.size());
  rk.resize(nI + nD);
  rk.head(nI) = g.I.segment(maps_->I_offset[sub], nI);
  rk.tail(nD) = g.D.segment(maps_->D_offset[sub], nD);
}

void TildeSolver::scatter_local(int sub, const Eigen::VectorXd& uk, TildeVec& out) const {
  const SubdomainDofs& d = maps_->subs[sub];
  const int nI = int(d.interior.size()), nD = int(d.delta.size());
  out.I.segment(maps_->I_offset[sub], nI) = uk.head(nI);
  out.D.segment(maps_->D_offset[sub], nD) = uk.tail(nD);
}

TildeVec TildeSolver::apply_inverse(const TildeVec& r) const {
  const int nsub = int(blocks_.size());
  TildeVec u = TildeVec::zero(maps_->n_I, maps_->n_P, maps_->n_D);
  std::vector<Eigen::VectorXd> w(nsub);
  Eigen::VectorXd c = r.P;
  for (int sub = 0; sub < nsub; ++sub) {
    const LocalBlock& blk = blocks_[sub];
    Eigen::VectorXd rk;
    gather_local(sub, r, rk);
    w[sub] = blk.k_dofs.empty() ? rk : Eigen::VectorXd(blk.K->solve(rk));
    if (!blk.groups.empty() && !blk.k_dofs.empty()) {
      Eigen::VectorXd et = blk.E.transpose() * w[sub];
      for (int q = 0; q < int(blk.groups.size()); ++q) c[blk.groups[q]] -= et[q];
    }
  }
  if (maps_->n_P > 0) u.P = coarse_fac_.solve(c);
  for (int sub = 0; sub < nsub; ++sub) {
    const LocalBlock& blk = blocks_[sub];
    Eigen::VectorXd uk = w[sub];
    if (!blk.groups.empty() && !blk.k_dofs.empty()) {
      Eigen::VectorXd up(blk.groups.size());
      for (int q = 0; q < int(blk.groups.size()); ++q) up[q] = u.P[blk.groups[q]];
      uk -= blk.KinvE * up;
    }
    scatter_local(sub, uk, u);
  }
  return u;
}

Eigen::VectorXd TildeSolver::apply_stilde_inv(const Eigen::VectorXd& r_delta) const {
  TildeVec r = TildeVec::zero(maps_->n_I, maps_->n_P, maps_->n_D);
  r.D = r_delta;
  return apply_inverse(r).D;
}

TildeVec TildeSolver::multiply(const TildeVec& u) const {
  TildeVec y = TildeVec::zero(maps_->n_I, maps_->n_P, maps_->n_D);
  for (int sub = 0; sub < int(blocks_.size()); ++sub) {
    const SubdomainDofs& d = maps_->subs[sub];
    Eigen::VectorXd x(d.total);
    for (int i = 0; i < d.total; ++i) {
      const SpaceMaps::Ref& ref = maps_->refs[sub][i];
      x[i] = (ref.blk == SpaceMaps::Blk::I)   ? u.I[ref.idx]
             : (ref.blk == SpaceMaps::Blk::D) ? u.D[ref.idx]
                                              : u.P[ref.idx];
    }
    Eigen::VectorXd z = (*locals_)[sub].A * x;
    for (int i = 0; i < d.total; ++i) {
      const SpaceMaps::Ref& ref = maps_->refs[sub][i];
      if (ref.blk == SpaceMaps::Blk::I)
        y.I[ref.idx] += z[i];
      else if (ref.blk == SpaceMaps::Blk::D)
        y.D[ref.idx] += z[i];
      else
        y.P[ref.idx] += z[i];
    }
  }
  return y;
}

IpSolver::IpSolver(const SpaceMaps& maps, const std::vector<LocalStiffness>& locals,
                   const std::vector<std::unique_ptr<SubdomainOperator>>& subops)
    : maps_(&maps), subops_(&subops) {
  const int nsub = int(maps.subs.size());
  blocks_.resize(nsub);
  Eigen::MatrixXd App = Eigen::MatrixXd::Zero(maps.n_P, maps.n_P);

  for (int sub = 0; sub < nsub; ++sub) {
    const SubdomainDofs& d = maps.subs[sub];
    LocalBlock& blk = blocks_[sub];
    std::vector<int> ppos(d.total, -1);
    for (int v : d.vprime) {
      int g = maps.refs[sub][v].idx;
      int local_g = -1;
      for (int q = 0; q < int(blk.groups.size()); ++q)
        if (blk.groups[q] == g) local_g = q;
      if (local_g < 0) {
        local_g = int(blk.groups.size());
        blk.groups.push_back(g);
      }
      ppos[v] = local_g;
    }
    const int nI = int(d.interior.size());
    blk.E = Eigen::MatrixXd::Zero(nI, blk.groups.size());
    const SpMat& A = locals[sub].A;
    for (int col = 0; col < A.outerSize(); ++col) {
      for (SpMat::InnerIterator it(A, col); it; ++it) {
        int r = int(it.row());
        if (d.interior_pos[r] >= 0 && ppos[col] >= 0)
          blk.E(d.interior_pos[r], ppos[col]) += it.value();
        else if (ppos[r] >= 0 && ppos[col] >= 0)
          App(blk.groups[ppos[r]], blk.groups[ppos[col]]) += it.value();
      }
    }
    blk.AinvE.resize(nI, blk.groups.size());
    for (int q = 0; q < int(blk.groups.size()); ++q)
      blk.AinvE.col(q) = subops[sub]->solve_interior(blk.E.col(q));
  }

  coarse_ = App;
  for (int sub = 0; sub < nsub; ++sub) {
    const LocalBlock& blk = blocks_[sub];
    if (blk.groups.empty() || blk.E.rows() == 0) continue;
    Eigen::MatrixXd contrib = blk.E.transpose() * blk.AinvE;
    for (int a = 0; a < int(blk.groups.size()); ++a)
      for (int b = 0; b < int(blk.groups.size()); ++b)
        coarse_(blk.groups[a], blk.groups[b]) -= contrib(a, b);
  }
  if (maps.n_P > 0) {
    coarse_fac_.compute(coarse_);
    if (coarse_fac_.info() != Eigen::Success || (coarse_fac_.vectorD().array() <= 0.0).any())
      throw std::runtime_error("IpSolver: (I,Pi) coarse block is singular");
  }
}

void IpSolver::solve(const Eigen::VectorXd& r_I, const Eigen::VectorXd& r_P, Eigen::VectorXd& u_I,
                     Eigen::VectorXd& u_P) const {
  const int nsub = int(blocks_.size());
  u_I.resize(maps_->n_I);
  Eigen::VectorXd c = r_P;
  std::vector<Eigen::VectorXd> w(nsub);
  for (int sub = 0; sub < nsub; ++sub) {
    const SubdomainDofs& d = maps_->subs[sub];
    const int nI = int(d.interior.size());
    w[sub] = (*subops_)[sub]->solve_interior(r_I.segment(maps_->I_offset[sub], nI));
    const LocalBlock& blk = blocks_[sub];
    if (!blk.groups.empty() && nI > 0) {
      Eigen::VectorXd et = blk.E.transpose() * w[sub];
      for (int q = 0; q < int(blk.groups.size()); ++q) c[blk.groups[q]] -= et[q];
    }
  }
  u_P = maps_->n_P > 0 ? Eigen::VectorXd(coarse_fac_.solve(c)) : Eigen::VectorXd(0);
  for (int sub = 0; sub < nsub; ++sub) {
    const SubdomainDofs& d = maps_->subs[sub];
    const int nI = int(d.interior.size());
    const LocalBlock& blk = blocks_[sub];
    Eigen::VectorXd uk = w[sub];
    if (!blk.groups.empty() && nI > 0) {
      Eigen::VectorXd up(blk.groups.size());
      for (int q = 0; q < int(blk.groups.size()); ++q) up[q] = u_P[blk.groups[q]];
      uk -= blk.AinvE * up;
    }
    u_I.segment(maps_->I_offset[sub], nI) = uk;
  }
}

FetiDpSystem::FetiDpSystem(const Partition& part, const std::vector<SubdomainMesh>& meshes,
                           const Interface& iface, const SpaceMaps& maps,
                           const CoefficientField& coeff, const PenaltyParams& penalty,
                           double beta)
    : maps_(&maps), beta_(beta) {
  const int nsub = part.count();
  locals_.reserve(nsub);
  subops_.reserve(nsub);
  for (int sub = 0; sub < nsub; ++sub)
    locals_.push_back(assemble_local(part, meshes, iface, maps.subs[sub], coeff, penalty));
  for (int sub = 0; sub < nsub; ++sub)
    subops_.push_back(std::make_unique<SubdomainOperator>(maps.subs[sub], locals_[sub].A));
  tilde_ = std::make_unique<TildeSolver>(maps, locals_);
  ip_ = std::make_unique<IpSolver>(maps, locals_, subops_);

  scaling_.resize(nsub);
  for (int sub = 0; sub < nsub; ++sub) {
    const SubdomainDofs& d = maps.subs[sub];
    double rho_i = coeff.rho(part, sub);
    scaling_[sub].resize(d.delta.size());
    for (size_t p = 0; p < d.delta.size(); ++p) {
      int nbr = d.iface_nbr[d.delta[p]];
      double rho_j = coeff.rho(part, nbr);
      double wi = std::pow(rho_i, beta), wj = std::pow(rho_j, beta);
      scaling_[sub][int(p)] = wj / (wi + wj);
    }
  }

  f_tilde_ = TildeVec::zero(maps.n_I, maps.n_P, maps.n_D);
  for (int sub = 0; sub < nsub; ++sub) {
    const SubdomainDofs& d = maps.subs[sub];
    for (int i = 0; i < d.total; ++i) {
      const SpaceMaps::Ref& ref = maps.refs[sub][i];
      double v = locals_[sub].load[i];
      if (ref.blk == SpaceMaps::Blk::I)
        f_tilde_.I[ref.idx] += v;
      else if (ref.blk == SpaceMaps::Blk::D)
        f_tilde_.D[ref.idx] += v;
      else
        f_tilde_.P[ref.idx] += v;
    }
  }
}

Eigen::VectorXd FetiDpSystem::apply_B(const Eigen::VectorXd& u_delta) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_mult());
  for (int sub = 0; sub < int(maps_->subs.size()); ++sub)
    for (const SpaceMaps::BEntry& e : maps_->b_cols[sub])
      out[e.row] += e.sign * u_delta[maps_->D_offset[sub] + e.dpos];
  return out;
}

Eigen::VectorXd FetiDpSystem::apply_BT(const Eigen::VectorXd& lambda) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(maps_->n_D);
  for (int sub = 0; sub < int(maps_->subs.size()); ++sub)
    for (const SpaceMaps::BEntry& e : maps_->b_cols[sub])
      out[maps_->D_offset[sub] + e.dpos] += e.sign * lambda[e.row];
  return out;
}

Eigen::VectorXd FetiDpSystem::apply_P(const Eigen::VectorXd& w_delta) const {
  Eigen::VectorXd jumps = apply_B(w_delta);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(maps_->n_D);
  for (int sub = 0; sub < int(maps_->subs.size()); ++sub)
    for (const SpaceMaps::BEntry& e : maps_->b_cols[sub])
      out[maps_->D_offset[sub] + e.dpos] += e.sign * scaling_[sub][e.dpos] * jumps[e.row];
  return out;
}

Eigen::VectorXd FetiDpSystem::apply_F(const Eigen::VectorXd& lambda) const {
  return apply_B(tilde_->apply_stilde_inv(apply_BT(lambda)));
}

Eigen::VectorXd FetiDpSystem::apply_Minv(const Eigen::VectorXd& mu) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_mult());
  for (int sub = 0; sub < int(maps_->subs.size()); ++sub) {
    const auto& cols = maps_->b_cols[sub];
    if (cols.empty()) continue;
    const SubdomainOperator& op = *subops_[sub];
    Eigen::VectorXd z = Eigen::VectorXd::Zero(op.n_delta());
    for (const SpaceMaps::BEntry& e : cols) z[e.dpos] += e.sign * mu[e.row];
    z.array() *= scaling_[sub].array();
    Eigen::VectorXd y = op.apply_schur_delta(z);
    y.array() *= scaling_[sub].array();
    for (const SpaceMaps::BEntry& e : cols) out[e.row] += e.sign * y[e.dpos];
  }
  return out;
}

Eigen::VectorXd FetiDpSystem::apply_Sprime_delta(const Eigen::VectorXd& u_delta) const {
  Eigen::VectorXd out(maps_->n_D);
  for (int sub = 0; sub < int(maps_->subs.size()); ++sub) {
    const SubdomainOperator& op = *subops_[sub];
    int off = maps_->D_offset[sub];
    out.segment(off, op.n_delta()) = op.apply_schur_delta(u_delta.segment(off, op.n_delta()));
  }
  return out;
}

Eigen::VectorXd FetiDpSystem::apply_stilde(const Eigen::VectorXd& u_delta) const {
  TildeVec x = TildeVec::zero(maps_->n_I, maps_->n_P, maps_->n_D);
  x.D = u_delta;
  TildeVec ax = tilde_->multiply(x);
  Eigen::VectorXd w_I, w_P;
  ip_->solve(-ax.I, -ax.P, w_I, w_P);
  TildeVec full{w_I, w_P, u_delta};
  return tilde_->multiply(full).D;
}

Eigen::VectorXd FetiDpSystem::g_tilde_delta() const {
  Eigen::VectorXd w_I, w_P;
  ip_->solve(f_tilde_.I, f_tilde_.P, w_I, w_P);
  TildeVec w{w_I, w_P, Eigen::VectorXd::Zero(maps_->n_D)};
  return f_tilde_.D - tilde_->multiply(w).D;
}

Eigen::VectorXd FetiDpSystem::rhs_g() const {
  return apply_B(tilde_->apply_inverse(f_tilde_).D);
}

FetiDpSystem::Solution FetiDpSystem::recover(const Eigen::VectorXd& lambda) const {
  TildeVec r = f_tilde_;
  if (lambda.size() > 0) r.D -= apply_BT(lambda);
  TildeVec u = tilde_->apply_inverse(r);

  GlobalIndexer gi(*maps_);
  Solution sol;
  sol.blocks = u;
  sol.x.resize(gi.n_global);
  for (int sub = 0; sub < int(maps_->subs.size()); ++sub) {
    const SubdomainDofs& d = maps_->subs[sub];
    for (int i = 0; i < d.own_count; ++i) {
      const SpaceMaps::Ref& ref = maps_->refs[sub][i];
      sol.x[gi.own_offset[sub] + i] = (ref.blk == SpaceMaps::Blk::I)   ? u.I[ref.idx]
                                      : (ref.blk == SpaceMaps::Blk::D) ? u.D[ref.idx]
                                                                       : u.P[ref.idx];
    }
  }
  sol.jump_norm = maps_->n_mult() > 0 ? apply_B(u.D).norm() : 0.0;
  return sol;
}

Eigen::VectorXd FetiDpSystem::local_vector(int sub, const TildeVec& u) const {
  const SubdomainDofs& d = maps_->subs[sub];
  Eigen::VectorXd x(d.total);
  for (int i = 0; i < d.total; ++i) {
    const SpaceMaps::Ref& ref = maps_->refs[sub][i];
    x[i] = (ref.blk == SpaceMaps::Blk::I)   ? u.I[ref.idx]
           : (ref.blk == SpaceMaps::Blk::D) ? u.D[ref.idx]
                                            : u.P[ref.idx];
  }
  return x;
}

}  // namespace fetidg

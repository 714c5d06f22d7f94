#include "fetidg/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

namespace fetidg {

namespace {

constexpr double kZeroGuard = 1e-13;

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

void track(double& hi, double num, double den) {
  if (den > kZeroGuard * std::max(1.0, num)) hi = std::max(hi, num / den);
}

}  // namespace

std::vector<InterpRatios> run_interp_ratio_suite(int M, const std::vector<int>& ms, int sub, int samples,
                                         std::uint64_t seed) {
  std::vector<InterpRatios> out;
  for (int m : ms) {
    Problem p = build_problem(M, m, CoefficientField::constant(1.0));
    int s = sub;
    if (s < 0) s = (M >= 3) ? p.part.id(1, 1) : 0;
    RefinedSubdomain ref(p, s);

    // The edge variant needs an interface side; take the first one.
    int edge_side = -1;
    for (Side sd : kSides)
      if (ref.side_is_interface(sd)) {
        edge_side = int(sd);
        break;
      }

    InterpRatios r;
    r.m = m;
    std::mt19937_64 rng(seed + m);
    for (int k = 0; k < samples; ++k) {
      Eigen::VectorXd u = random_vector(ref.parent_dim(), rng);
      Eigen::VectorXd uu = ref.interp_forward(u);
      double a_par = ref.parent_vol_energy(u);
      double a_ref = ref.refined_vol_energy(uu);
      double p_par = ref.parent_penalty(u);
      double p_ref = ref.refined_penalty(uu);
      track(r.a_fwd, a_ref, a_par);
      track(r.a_bwd, a_par, a_ref);
      track(r.p_transfer, p_ref, p_par + a_par);
      track(r.p_back, p_par, p_ref + a_ref);

      r.ident_err = std::max(r.ident_err, (ref.interp_backward(uu) - u).lpNorm<Eigen::Infinity>());

      if (edge_side >= 0) {
        Eigen::VectorXd ue = ref.interp_forward(u, edge_side);
        double e_par = ref.parent_edge_jump_l2(u, Side(edge_side));
        double e_ref = ref.refined_edge_jump_l2(ue, Side(edge_side));
        track(r.edge_fwd, e_ref, e_par);
        track(r.edge_bwd, e_par, e_ref);
        r.ident_err =
            std::max(r.ident_err, (ref.interp_backward(ue) - u).lpNorm<Eigen::Infinity>());
      }

      // Harmonic d-energy equivalence.
      Eigen::VectorXd hu = ref.harmonic_parent(u);
      Eigen::VectorXd huu = ref.harmonic_refined(ref.interp_forward(hu));
      double d_par = ref.parent_d_energy(hu);
      double d_ref = ref.refined_d_energy(huu);
      track(r.harm_fwd, d_ref, d_par);
      track(r.harm_bwd, d_par, d_ref);

      // Backward-map bounds on arbitrary refined functions.
      Eigen::VectorXd w = random_vector(ref.n_total(), rng);
      Eigen::VectorXd bw = ref.interp_backward(w);
      track(r.back_vol, ref.parent_vol_energy(bw), ref.refined_vol_energy(w));
      track(r.back_pen, ref.parent_penalty(bw), ref.refined_penalty(w));
    }
    out.push_back(r);
  }
  return out;
}

void write_interp_ratio_csv(std::ostream& os, const std::vector<InterpRatios>& rows) {
  os << "m,a_fwd,a_bwd,p_transfer,p_back,edge_fwd,edge_bwd,back_vol,back_pen,ident_err,"
        "harm_fwd,harm_bwd\n";
  for (const InterpRatios& r : rows)
    os << r.m << ',' << r.a_fwd << ',' << r.a_bwd << ',' << r.p_transfer << ',' << r.p_back << ','
       << r.edge_fwd << ',' << r.edge_bwd << ',' << r.back_vol << ',' << r.back_pen << ','
       << r.ident_err << ',' << r.harm_fwd << ',' << r.harm_bwd << '\n';
}

EnergyEquivalence sample_energy_equivalence(const Problem& p, int samples, std::uint64_t seed) {
  EnergyEquivalence eq;
  eq.gamma0 = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  for (int sub = 0; sub < p.part.count(); ++sub) {
    const SubdomainDofs& d = p.maps.subs[sub];
    SpMat D = assemble_local(p.part, p.meshes, p.iface, d, p.coeff, p.penalty, kFormD).A;
    const SpMat& A = p.feti->locals()[sub].A;
    for (int k = 0; k < samples; ++k) {
      Eigen::VectorXd u = random_vector(d.total, rng);
      double du = u.dot(D * u);
      if (du < kZeroGuard) continue;
      double au = u.dot(A * u);
      eq.gamma0 = std::min(eq.gamma0, au / du);
      eq.gamma1 = std::max(eq.gamma1, au / du);
      ++eq.samples;
    }
  }
  return eq;
}

double dual_schur_slack(const Problem& p, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd u = random_vector(p.maps.n_D, rng);
    double st = u.dot(p.feti->apply_stilde(u));
    double sp = u.dot(p.feti->apply_Sprime_delta(u));
    worst = std::max(worst, (st - sp) / sp);
  }
  return worst;
}

double p_delta_energy_ratio(const Problem& p, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double hi = 0.0;
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd u = random_vector(p.maps.n_D, rng);
    Eigen::VectorXd pu = p.feti->apply_P(u);
    double num = pu.dot(p.feti->apply_Sprime_delta(pu));
    double den = u.dot(p.feti->apply_stilde(u));
    track(hi, num, den);
  }
  return hi;
}

std::vector<SpectrumCase> spectrum_grid(const std::vector<int>& Ms, const std::vector<int>& ms,
                                        const std::vector<double>& betas,
                                        const std::vector<double>& jumps) {
  std::vector<SpectrumCase> out;
  for (int M : Ms)
    for (int m : ms)
      for (double beta : betas)
        for (double jump : jumps) {
          CoefficientField coeff = (jump == 1.0) ? CoefficientField::constant(1.0)
                                                 : CoefficientField::checkerboard(1.0, jump);
          Problem p = build_problem(M, m, coeff, 10.0, beta);
          Spectrum sp = dense_preconditioned_spectrum(*p.feti);
          out.push_back({M, m, beta, jump, sp.lambda_min, sp.lambda_max});
        }
  return out;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumCase>& rows) {
  os << "M,m,beta,rho_r,lambda_min,lambda_max,cond\n";
  for (const SpectrumCase& r : rows)
    os << r.M << ',' << r.m << ',' << r.beta << ',' << r.rho_red << ',' << r.lambda_min << ','
       << r.lambda_max << ',' << r.lambda_max / r.lambda_min << '\n';
}

}  // namespace fetidg

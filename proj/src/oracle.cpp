#include "fetidg/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

namespace fetidg {

Eigen::VectorXd direct_solve(const SpMat& A, const Eigen::VectorXd& f) {
  Eigen::SimplicialLDLT<SpMat> fac(A);
  if (fac.info() != Eigen::Success || fac.vectorD().minCoeff() <= 0.0)
    throw std::runtime_error("direct_solve: matrix is not SPD");
  Eigen::VectorXd x = fac.solve(f);
  // One step of iterative refinement keeps the residual near machine level
  // on badly conditioned jump cases.
  x += fac.solve(f - A * x);
  return x;
}

Eigen::MatrixXd dense_operator(int n,
                               const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op) {
  Eigen::MatrixXd M(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < n; ++c) {
    e[c] = 1.0;
    M.col(c) = op(e);
    e[c] = 0.0;
  }
  return M;
}

Spectrum dense_preconditioned_spectrum(const FetiDpSystem& feti) {
  const int n = feti.n_mult();
  Spectrum sp;
  if (n == 0) return sp;
  Eigen::MatrixXd F =
      dense_operator(n, [&](const Eigen::VectorXd& v) { return feti.apply_F(v); });
  Eigen::MatrixXd Minv =
      dense_operator(n, [&](const Eigen::VectorXd& v) { return feti.apply_Minv(v); });
  F = 0.5 * (F + F.transpose()).eval();
  Minv = 0.5 * (Minv + Minv.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_m(Minv);
  if (es_m.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("dense_preconditioned_spectrum: M^{-1} not positive definite");
  Eigen::MatrixXd C = es_m.operatorSqrt();
  Eigen::MatrixXd G = C * F * C;
  G = 0.5 * (G + G.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  sp.eigenvalues = es.eigenvalues();
  sp.lambda_min = sp.eigenvalues.minCoeff();
  sp.lambda_max = sp.eigenvalues.maxCoeff();
  return sp;
}

Eigen::VectorXd dense_projection_spectrum(const FetiDpSystem& feti) {
  const SpaceMaps& maps = feti.maps();
  Eigen::MatrixXd P =
      dense_operator(maps.n_D, [&](const Eigen::VectorXd& v) { return feti.apply_P(v); });
  Eigen::EigenSolver<Eigen::MatrixXd> es(P);
  return es.eigenvalues().real();
}

SchurPath assemble_schur_path(const Problem& p) {
  const SpaceMaps& maps = p.maps;
  GlobalIndexer gi(maps);
  SchurPath out;

  // X(Gamma): own interface dofs, ascending global id.
  std::vector<int> gamma_pos(gi.n_global, -1);
  for (int sub = 0; sub < int(maps.subs.size()); ++sub) {
    const SubdomainDofs& d = maps.subs[sub];
    for (int i = 0; i < d.own_count; ++i)
      if (d.cls[i] != DofClass::Interior) {
        gamma_pos[gi.own_offset[sub] + i] = 0;
        out.gamma_global.push_back(gi.own_offset[sub] + i);
      }
  }
  for (int k = 0; k < int(out.gamma_global.size()); ++k) gamma_pos[out.gamma_global[k]] = k;

  const int nG = int(out.gamma_global.size());
  out.S_hat = Eigen::MatrixXd::Zero(nG, nG);
  out.g_hat = Eigen::VectorXd::Zero(nG);

  for (int sub = 0; sub < int(maps.subs.size()); ++sub) {
    const SubdomainDofs& d = maps.subs[sub];
    const SubdomainOperator& op = p.feti->subop(sub);
    const auto& gamma = op.gamma();
    const int ng = int(gamma.size());

    // Column map W_i(Gamma') -> X(Gamma).
    std::vector<int> to_global(ng);
    for (int q = 0; q < ng; ++q) to_global[q] = gamma_pos[gi(sub, gamma[q], maps)];

    Eigen::MatrixXd S = op.dense_schur();
    for (int a = 0; a < ng; ++a)
      for (int b = 0; b < ng; ++b) out.S_hat(to_global[a], to_global[b]) += S(a, b);

    // g-hat = f_Gamma - R^T A_GI A_II^{-1} f_I.
    Eigen::VectorXd corr = Eigen::VectorXd::Zero(ng);
    if (op.n_interior() > 0) {
      Eigen::VectorXd fI(op.n_interior());
      for (int q = 0; q < op.n_interior(); ++q) fI[q] = p.feti->locals()[sub].load[d.interior[q]];
      corr = op.A_GI() * op.solve_interior(fI);
    }
    for (int q = 0; q < ng; ++q) {
      double fG = gamma[q] < d.own_count ? p.feti->locals()[sub].load[gamma[q]] : 0.0;
      out.g_hat[to_global[q]] += fG - corr[q];
    }
  }
  return out;
}

GlobalSystem assemble_global_system(const Problem& p) {
  GlobalSystem gs;
  gs.A = assemble_global(p.feti->locals(), p.maps);
  gs.f = assemble_global_load(p.feti->locals(), p.maps);
  return gs;
}

double global_residual(const Problem& p, const Eigen::VectorXd& x) {
  GlobalSystem gs = assemble_global_system(p);
  return (gs.f - gs.A * x).norm() / gs.f.norm();
}

double mms_l2_error(int M, int m, double delta) {
  const double pi = std::acos(-1.0);
  auto u_ex = [pi](Vec2 q) { return std::sin(pi * q.x) * std::sin(pi * q.y); };
  auto source = [pi, u_ex](Vec2 q) { return 2.0 * pi * pi * u_ex(q); };

  Problem p = build_problem(M, m, CoefficientField::constant(1.0), delta);
  std::vector<LocalStiffness> locals = p.feti->locals();
  for (int sub = 0; sub < p.part.count(); ++sub)
    assemble_load(p.meshes[sub], source, locals[sub].load);
  SpMat A = assemble_global(locals, p.maps);
  Eigen::VectorXd f = assemble_global_load(locals, p.maps);
  Eigen::VectorXd x = direct_solve(A, f);

  // Degree-5 quadrature of (u_h - u)^2, elementwise.
  static const double w1 = 0.225;
  static const double w2 = 0.1323941527885062;
  static const double w3 = 0.1259391805448271;
  static const double a2 = 0.0597158717897698, b2 = 0.4701420641051151;
  static const double a3 = 0.7974269853530873, b3 = 0.1012865073234563;
  const double bary[7][3] = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {a2, b2, b2}, {b2, a2, b2},
                             {b2, b2, a2},                {a3, b3, b3}, {b3, a3, b3},
                             {b3, b3, a3}};
  const double wq[7] = {w1, w2, w2, w2, w3, w3, w3};

  GlobalIndexer gi(p.maps);
  double err2 = 0.0;
  for (int sub = 0; sub < p.part.count(); ++sub) {
    const SubdomainMesh& mesh = p.meshes[sub];
    for (int e = 0; e < int(mesh.elems.size()); ++e) {
      const Tri& t = mesh.elems[e];
      double vals[3];
      for (int lv = 0; lv < 3; ++lv) vals[lv] = x[gi.own_offset[sub] + 3 * e + lv];
      for (int q = 0; q < 7; ++q) {
        Vec2 pq = bary[q][0] * t.v[0] + bary[q][1] * t.v[1] + bary[q][2] * t.v[2];
        double uh = bary[q][0] * vals[0] + bary[q][1] * vals[1] + bary[q][2] * vals[2];
        double diff = uh - u_ex(pq);
        err2 += wq[q] * t.area() * diff * diff;
      }
    }
  }
  return std::sqrt(err2);
}

}  // namespace fetidg

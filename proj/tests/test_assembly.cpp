#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <map>
#include <sstream>

#include "fetidg/assembly.hpp"
#include "fetidg/problem.hpp"

using namespace fetidg;

namespace {

double max_abs(const SpMat& A) {
  double v = 0.0;
  for (int c = 0; c < A.outerSize(); ++c)
    for (SpMat::InnerIterator it(A, c); it; ++it) v = std::max(v, std::abs(it.value()));
  return v;
}

double asymmetry(const SpMat& A) {
  SpMat D = SpMat(A.transpose()) - A;
  return max_abs(D);
}

}  // namespace

TEST_CASE("element stiffness closed form") {
  Tri t;
  t.v = {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
  t.node = {0, 1, 2};
  Eigen::Matrix3d K = element_stiffness(t, 1.0);
  Eigen::Matrix3d ref;
  ref << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  ref *= 0.5;
  CHECK((K - ref).cwiseAbs().maxCoeff() < 1e-14);

  // conformal invariance: scaling leaves the stiffness unchanged
  Tri ts = t;
  for (auto& v : ts.v) v = 0.37 * v;
  Eigen::Matrix3d Ks = element_stiffness(ts, 1.0);
  CHECK((Ks - ref).cwiseAbs().maxCoeff() < 1e-13);

  // constants in the kernel
  CHECK(K.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);

  Tri degenerate = t;
  degenerate.v[2] = Vec2{2, 0};
  CHECK_THROWS_AS(element_stiffness(degenerate, 1.0), std::invalid_argument);
}

TEST_CASE("interior penalty of a piecewise constant jump") {
  // one subdomain cell: two triangles, one interior (diagonal) edge
  Problem p = build_problem(1, 1, CoefficientField::constant(2.0), 10.0);
  SpMat P = assemble_local(p.part, p.meshes, p.iface, p.maps.subs[0], p.coeff, p.penalty,
                           kInteriorP)
                .A;
  Eigen::VectorXd u(6);
  double cp = 1.7, cm = -0.4;
  u << cp, cp, cp, cm, cm, cm;
  double expect = 10.0 * 2.0 * (cp - cm) * (cp - cm);
  CHECK(u.dot(P * u) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("affine consistency without boundary terms") {
  // the DG energy of a globally affine interpolant reduces to the exact
  // Dirichlet energy once all jumps vanish
  Problem p = build_problem(2, 2, CoefficientField::constant(2.5), 10.0);
  unsigned parts = kVolume | kInteriorS | kInteriorP | kInterfaceS | kInterfaceP;
  double energy = 0.0;
  auto f = [](const Vec2& q) { return 1.0 + 2.0 * q.x - 3.0 * q.y; };
  for (int sub = 0; sub < p.part.count(); ++sub) {
    const SubdomainDofs& d = p.maps.subs[sub];
    SpMat A = assemble_local(p.part, p.meshes, p.iface, d, p.coeff, p.penalty, parts).A;
    Eigen::VectorXd u(d.total);
    for (int i = 0; i < d.total; ++i) u[i] = f(d.pos[i]);
    energy += u.dot(A * u);
  }
  CHECK(energy == doctest::Approx(2.5 * (4.0 + 9.0)).epsilon(1e-12));
}

TEST_CASE("interface terms against a single-domain discretization") {
  // 2x2 subdomains with m=2 triangulate the same mesh as one subdomain at
  // m=4; with equal coefficients the assembled matrices agree up to the
  // dof permutation induced by (element centroid, vertex position).
  const double rho = 1.4, delta = 10.0;
  Problem p_dd = build_problem(2, 2, CoefficientField::constant(rho), delta);
  Problem p_single = build_problem(1, 4, CoefficientField::constant(rho), delta);

  GlobalIndexer gi_dd(p_dd.maps);
  SpMat A_dd = assemble_global(p_dd.feti->locals(), p_dd.maps);
  SpMat A_s = assemble_global(p_single.feti->locals(), p_single.maps);
  REQUIRE(A_dd.rows() == A_s.rows());

  auto key_of = [](const SubdomainMesh& mesh, int e, int lv) {
    const Tri& t = mesh.elems[e];
    double cx = (t.v[0].x + t.v[1].x + t.v[2].x) / 3.0;
    double cy = (t.v[0].y + t.v[1].y + t.v[2].y) / 3.0;
    long r = std::lround(cx * 3 * 1e6) * 20000000L + std::lround(cy * 3 * 1e6);
    return std::pair<long, long>(r, std::lround(t.v[lv].x * 1e6) * 20000000L +
                                        std::lround(t.v[lv].y * 1e6));
  };
  std::map<std::pair<long, long>, int> single_of;
  for (int e = 0; e < int(p_single.meshes[0].elems.size()); ++e)
    for (int lv = 0; lv < 3; ++lv) single_of[key_of(p_single.meshes[0], e, lv)] = 3 * e + lv;

  std::vector<int> perm(A_dd.rows());
  for (int sub = 0; sub < 4; ++sub)
    for (int e = 0; e < int(p_dd.meshes[sub].elems.size()); ++e)
      for (int lv = 0; lv < 3; ++lv)
        perm[gi_dd.own_offset[sub] + 3 * e + lv] = single_of.at(key_of(p_dd.meshes[sub], e, lv));

  Eigen::MatrixXd D_dd = Eigen::MatrixXd(A_dd);
  Eigen::MatrixXd D_s = Eigen::MatrixXd(A_s);
  double worst = 0.0;
  for (int i = 0; i < D_dd.rows(); ++i)
    for (int j = 0; j < D_dd.cols(); ++j)
      worst = std::max(worst, std::abs(D_dd(i, j) - D_s(perm[i], perm[j])));
  CHECK(worst < 1e-13 * max_abs(A_s));
}

TEST_CASE("floating subdomain kernel and boundary SPD") {
  Problem p = build_problem(4, 2, CoefficientField::constant(1.0));
  // interior subdomain: constants (own and copies alike) lie in the kernel
  int sub = p.part.id(1, 1);
  const SpMat& A = p.feti->locals()[sub].A;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(A.rows());
  CHECK((A * ones).lpNorm<Eigen::Infinity>() < 1e-13 * max_abs(A));

  // corner subdomain: the boundary penalty removes the kernel
  Eigen::MatrixXd A0 = Eigen::MatrixXd(p.feti->locals()[0].A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A0);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("constant load integrates to h^2/6 per dof") {
  Problem p = build_problem(2, 4, CoefficientField::constant(1.0));
  double h = p.meshes[0].h;
  const Eigen::VectorXd& load = p.feti->locals()[0].load;
  for (int i = 0; i < p.maps.subs[0].own_count; ++i)
    CHECK(load[i] == doctest::Approx(h * h / 6.0).epsilon(1e-14));
  // trace copies carry no load
  for (int i = p.maps.subs[0].own_count; i < p.maps.subs[0].total; ++i) CHECK(load[i] == 0.0);
}

TEST_CASE("global matrix: dimension, symmetry, SPD") {
  Problem p = build_problem(2, 2, CoefficientField::constant(1.0));
  SpMat A = assemble_global(p.feti->locals(), p.maps);
  CHECK(A.rows() == 3 * 2 * 2 * 2 * 4);  // 3 * 2m^2 * M^2
  CHECK(asymmetry(A) < 1e-14 * max_abs(A));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((Eigen::MatrixXd(A)));
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // local matrices are symmetric as well
  for (const LocalStiffness& ls : p.feti->locals())
    CHECK(asymmetry(ls.A) < 1e-14 * max_abs(ls.A));
}

TEST_CASE("single subdomain reduces to plain SIPDG with Nitsche boundary") {
  Problem p = build_problem(1, 2, CoefficientField::constant(1.0));
  CHECK(p.maps.subs[0].total == p.maps.subs[0].own_count);
  SpMat A = assemble_global(p.feti->locals(), p.maps);
  SpMat diff = A - p.feti->locals()[0].A;
  CHECK(max_abs(diff) == 0.0);
}

TEST_CASE("d-form energy") {
  Problem p = build_problem(4, 2, CoefficientField::constant(1.0));
  int sub = p.part.id(1, 1);
  SpMat D =
      assemble_local(p.part, p.meshes, p.iface, p.maps.subs[sub], p.coeff, p.penalty, kFormD).A;
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(D.rows());
  CHECK(d_energy({D}, {zero}) == 0.0);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(D.rows());
  CHECK(d_energy({D}, {ones}) < 1e-12 * max_abs(D));
}

TEST_CASE("triplet export round trip") {
  Problem p = build_problem(1, 1, CoefficientField::constant(1.0));
  std::ostringstream os;
  write_triplets(os, p.feti->locals()[0].A);
  std::istringstream is(os.str());
  int r, c;
  double v;
  int count = 0;
  double sum = 0.0;
  while (is >> r >> c >> v) {
    ++count;
    sum += v;
  }
  CHECK(count == p.feti->locals()[0].A.nonZeros());
  CHECK(sum == doctest::Approx(Eigen::MatrixXd(p.feti->locals()[0].A).sum()));
}

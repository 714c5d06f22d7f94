#include <doctest.h>
#include <cmath>
#include <array>

#include "fetidg/mesh.hpp"

using namespace fetidg;

TEST_CASE("partition counts and adjacency") {
  Partition p2 = build_partition(2);
  CHECK(p2.count() == 4);
  for (int sub = 0; sub < 4; ++sub) CHECK(p2.interior_side_count(sub) == 2);

  Partition p8 = build_partition(8);
  CHECK(p8.count() == 64);
  CHECK(p8.interior_side_count(p8.id(3, 4)) == 4);

  // neighbor symmetry
  for (int sub = 0; sub < p8.count(); ++sub)
    for (Side s : kSides) {
      int nb = p8.neighbor(sub, s);
      if (nb >= 0) CHECK(p8.neighbor(nb, opposite(s)) == sub);
    }

  CHECK_THROWS_AS(build_partition(0), std::invalid_argument);
}

TEST_CASE("corner subdomain has two interior and two boundary macro edges") {
  Partition p = build_partition(4);
  std::vector<SubdomainMesh> meshes;
  for (int sub = 0; sub < p.count(); ++sub) meshes.push_back(triangulate_subdomain(p, sub, 2));
  Interface iface = enumerate_interface(p, meshes);
  int interior = 0, boundary = 0;
  for (Side s : kSides) {
    int e = iface.edge_of_side[0][int(s)];
    REQUIRE(e >= 0);
    (iface.edges[e].boundary ? boundary : interior)++;
  }
  CHECK(interior == 2);
  CHECK(boundary == 2);
}

TEST_CASE("structured triangulation") {
  Partition p = build_partition(2);
  SubdomainMesh m1 = triangulate_subdomain(p, 0, 1);
  CHECK(m1.elems.size() == 2);

  SubdomainMesh m4 = triangulate_subdomain(p, 3, 4);
  CHECK(m4.elems.size() == 32);
  int boundary_edges = 0;
  for (Side s : kSides) boundary_edges += int(m4.side_edges[int(s)].size());
  CHECK(boundary_edges == 16);

  double href = m4.h;
  for (const Tri& t : m4.elems) CHECK(t.area() == doctest::Approx(href * href / 2).epsilon(1e-14));

  // conforming: interior edge count (2m^2 elements, 3 edges each, 4m on the boundary)
  CHECK(int(m4.interior_edges.size()) == (3 * 32 - 16) / 2);

  CHECK_THROWS_AS(triangulate_subdomain(p, 0, 0), std::invalid_argument);
}

TEST_CASE("interface enumeration and exact matching") {
  Partition p = build_partition(2);
  const int m = 4;
  std::vector<SubdomainMesh> meshes;
  for (int sub = 0; sub < p.count(); ++sub) meshes.push_back(triangulate_subdomain(p, sub, m));
  Interface iface = enumerate_interface(p, meshes);

  int interior = 0, boundary = 0;
  for (const MacroEdgePair& me : iface.edges) (me.boundary ? boundary : interior)++;
  CHECK(interior == 4);
  CHECK(boundary == 8);

  for (const MacroEdgePair& me : iface.edges) {
    if (me.boundary) continue;
    const SubdomainMesh& mi = meshes[me.sub_i];
    const SubdomainMesh& mj = meshes[me.sub_j];
    const auto& ei = mi.side_edges[int(me.side_i)];
    const auto& ej = mj.side_edges[int(me.side_j)];
    REQUIRE(ei.size() == ej.size());
    double length = 0.0;
    for (size_t k = 0; k < ei.size(); ++k) {
      // fine edges coincide bit-exactly, endpoint by endpoint
      Vec2 a0 = mi.elems[ei[k].elem].v[ei[k].lv0];
      Vec2 a1 = mi.elems[ei[k].elem].v[ei[k].lv1];
      Vec2 b0 = mj.elems[ej[k].elem].v[ej[k].lv0];
      Vec2 b1 = mj.elems[ej[k].elem].v[ej[k].lv1];
      CHECK(a0.x == b0.x);
      CHECK(a0.y == b0.y);
      CHECK(a1.x == b1.x);
      CHECK(a1.y == b1.y);
      Vec2 d = a1 - a0;
      length += std::sqrt(dot(d, d));
    }
    CHECK(length == doctest::Approx(p.H).epsilon(1e-14));
  }
}

TEST_CASE("mismatched neighbor meshes are rejected") {
  Partition p = build_partition(2);
  std::vector<SubdomainMesh> meshes;
  meshes.push_back(triangulate_subdomain(p, 0, 4));
  meshes.push_back(triangulate_subdomain(p, 1, 8));
  meshes.push_back(triangulate_subdomain(p, 2, 4));
  meshes.push_back(triangulate_subdomain(p, 3, 4));
  CHECK_THROWS_AS(enumerate_interface(p, meshes), std::runtime_error);
}

TEST_CASE("partition conformity: closures meet in corners, edges or not at all") {
  Partition p = build_partition(3);
  auto box = [&](int sub) {
    double x0 = p.col(sub) * p.H, y0 = p.row(sub) * p.H;
    return std::array<double, 4>{x0, y0, x0 + p.H, y0 + p.H};
  };
  for (int a = 0; a < p.count(); ++a) {
    for (int b = a + 1; b < p.count(); ++b) {
      auto A = box(a), B = box(b);
      double w = std::min(A[2], B[2]) - std::max(A[0], B[0]);
      double h = std::min(A[3], B[3]) - std::max(A[1], B[1]);
      if (w < 0.0 || h < 0.0) continue;  // disjoint closures
      int dr = std::abs(p.row(a) - p.row(b)), dc = std::abs(p.col(a) - p.col(b));
      if (w == 0.0 && h == 0.0) {
        CHECK(dr == 1);
        CHECK(dc == 1);  // a shared corner
      } else {
        // a full shared macro edge
        CHECK(w * h == 0.0);
        CHECK(std::max(w, h) == doctest::Approx(p.H));
        CHECK(dr + dc == 1);
      }
    }
  }
}

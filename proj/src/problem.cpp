#include "fetidg/problem.hpp"

namespace fetidg {

Problem build_problem(int M, int m, const CoefficientField& coeff, double delta, double beta,
                      CornerPolicy policy) {
  Problem p;
  p.part = build_partition(M);
  p.meshes.reserve(p.part.count());
  for (int sub = 0; sub < p.part.count(); ++sub)
    p.meshes.push_back(triangulate_subdomain(p.part, sub, m));
  p.iface = enumerate_interface(p.part, p.meshes);
  p.maps = build_space_maps(p.part, p.meshes, p.iface, policy);
  p.coeff = coeff;
  p.penalty.delta = delta;
  p.beta = beta;
  p.feti = std::make_unique<FetiDpSystem>(p.part, p.meshes, p.iface, p.maps, p.coeff, p.penalty,
                                          beta);
  return p;
}

}  // namespace fetidg

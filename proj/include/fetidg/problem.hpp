#pragma once

#include <memory>

#include "fetidg/fetidp.hpp"

namespace fetidg {

/// Fully built problem instance: partition, meshes, dof maps and the
/// FETI-DP operators for one configuration.
struct Problem {
  Partition part;
  std::vector<SubdomainMesh> meshes;
  Interface iface;
  SpaceMaps maps;
  CoefficientField coeff;
  PenaltyParams penalty;
  double beta = 1.0;
  std::unique_ptr<FetiDpSystem> feti;
};

Problem build_problem(int M, int m, const CoefficientField& coeff, double delta = 10.0,
                      double beta = 1.0, CornerPolicy policy = CornerPolicy::PairwisePerEdge);

}  // namespace fetidg

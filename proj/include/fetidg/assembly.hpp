#pragma once

#include <functional>
#include <iosfwd>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fetidg/dof_space.hpp"
#include "fetidg/mesh.hpp"

namespace fetidg {

using SpMat = Eigen::SparseMatrix<double>;

/// Per-subdomain constant diffusion coefficient; checkerboard coloring has
/// the bottom-left subdomain black.
struct CoefficientField {
  enum class Pattern { Constant, Checkerboard };
  Pattern pattern = Pattern::Constant;
  double rho_const = 1.0;
  double rho_black = 1.0;
  double rho_red = 1.0;

  static CoefficientField constant(double rho);
  static CoefficientField checkerboard(double rho_black, double rho_red);

  double rho(const Partition& part, int sub) const;
};

struct PenaltyParams {
  double delta = 10.0;  // interior-penalty parameter; l_ij = 2 interior / 1 boundary
};

/// Term selection for the local forms. The full local form a'_i is the sum
/// of all parts; the positive form d_i drops the consistency terms.
enum FormParts : unsigned {
  kVolume = 1u << 0,      // broken energy a_i
  kInteriorS = 1u << 1,   // s_{i,0}
  kInteriorP = 1u << 2,   // p_{i,0}
  kInterfaceS = 1u << 3,  // s_{i,d} on interior macro edges (l = 2)
  kInterfaceP = 1u << 4,  // p_{i,d} on interior macro edges (l = 2)
  kBoundaryS = 1u << 5,   // s_{i,d} on domain-boundary edges (l = 1, u_d = 0)
  kBoundaryP = 1u << 6,   // p_{i,d} on domain-boundary edges
  kFormFull = kVolume | kInteriorS | kInteriorP | kInterfaceS | kInterfaceP | kBoundaryS | kBoundaryP,
  kFormD = kVolume | kInteriorP | kInterfaceP | kBoundaryP,
};

/// Exact stiffness of the weighted Laplacian for linear elements.
Eigen::Matrix3d element_stiffness(const Tri& tri, double rho);

/// Exact load for linears: constant source fast path and a degree-5
/// quadrature for smooth sources.
Eigen::Vector3d element_load_const(const Tri& tri, double value);
Eigen::Vector3d element_load(const Tri& tri, const std::function<double(Vec2)>& f);

/// Local stiffness A'_i on the extended space W_i, with its load vector
/// (trace copies carry no load).
struct LocalStiffness {
  int sub = -1;
  SpMat A;
  Eigen::VectorXd load;
};

LocalStiffness assemble_local(const Partition& part, const std::vector<SubdomainMesh>& meshes,
                              const Interface& iface, const SubdomainDofs& dofs,
                              const CoefficientField& coeff, const PenaltyParams& penalty,
                              unsigned parts = kFormFull);

void assemble_load(const SubdomainMesh& mesh, const std::function<double(Vec2)>& f,
                   Eigen::VectorXd& load);

/// Maps extended local dofs onto the global DG space X(Omega): own dofs
/// keep their slot, trace copies fold onto the neighbor's own dof.
struct GlobalIndexer {
  std::vector<int> own_offset;
  int n_global = 0;

  GlobalIndexer() = default;
  explicit GlobalIndexer(const SpaceMaps& maps);
  int operator()(int sub, int local, const SpaceMaps& maps) const;
};

SpMat assemble_global(const std::vector<LocalStiffness>& locals, const SpaceMaps& maps);
Eigen::VectorXd assemble_global_load(const std::vector<LocalStiffness>& locals,
                                     const SpaceMaps& maps);

/// Broken energy d_h(u, u) of a block vector over W(Omega').
double d_energy(const std::vector<SpMat>& d_forms, const std::vector<Eigen::VectorXd>& u);

/// Coordinate triplet text export (row col value per line).
void write_triplets(std::ostream& os, const SpMat& A);

}  // namespace fetidg

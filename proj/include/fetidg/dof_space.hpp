#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fetidg/mesh.hpp"

namespace fetidg {

/// Role of a degree of freedom of the extended local space W_i.
///
/// Own dofs live on elements of the subdomain (3 per triangle); trace dofs
/// duplicate the neighbor's boundary values on the shared macro edge
/// (2 per fine edge). GammaOwn/TraceDual are the dual (non-corner)
/// interface dofs, CornerOwn/TraceCorner the primal candidates.
enum class DofClass : std::uint8_t {
  Interior,
  GammaOwn,
  CornerOwn,
  TraceDual,
  TraceCorner,
};

inline bool is_interface(DofClass c) { return c != DofClass::Interior; }
inline bool is_corner(DofClass c) { return c == DofClass::CornerOwn || c == DofClass::TraceCorner; }
inline bool is_dual(DofClass c) { return c == DofClass::GammaOwn || c == DofClass::TraceDual; }
inline bool is_trace(DofClass c) { return c == DofClass::TraceDual || c == DofClass::TraceCorner; }

const char* to_string(DofClass c);

/// Dof enumeration and classification for one extended subdomain.
///
/// Local ids: own dofs first (id = 3*elem + vertex, element-major), then one
/// trace block of 2m dofs per interior side, in Side order. Trace dof
/// (side, k, end) duplicates the neighbor's own dof at endpoint `end` of the
/// k-th fine edge of the shared macro edge (ascending order along the edge).
struct SubdomainDofs {
  int sub = -1;
  int m = 0;
  int own_count = 0;
  int total = 0;
  std::array<int, 4> trace_offset = {-1, -1, -1, -1};

  std::vector<DofClass> cls;
  std::vector<Vec2> pos;
  /// For trace dofs (indexed by local - own_count): (neighbor sub, own dof id there).
  std::vector<std::pair<int, int>> trace_source;
  /// For trace dofs: the side of this subdomain the copy belongs to.
  std::vector<Side> trace_side;
  /// For interface dofs: the neighboring subdomain across the dof's macro
  /// edge (-1 for interior dofs; corner own dofs on two interfaces keep the
  /// first one in Side order, which only matters for reporting).
  std::vector<int> iface_nbr;

  std::vector<int> interior;  // I_i, ascending
  std::vector<int> delta;     // Delta_i, ascending
  std::vector<int> vprime;    // V'_i, ascending

  std::vector<int> delta_pos;     // local -> position in delta, -1 otherwise
  std::vector<int> interior_pos;  // local -> position in interior, -1 otherwise

  int trace_dof(Side s, int k, int end) const { return trace_offset[int(s)] + 2 * k + end; }
  /// Own dof at endpoint `end` of fine edge k of side s.
  int own_side_dof(const SubdomainMesh& mesh, Side s, int k, int end) const {
    const BoundaryEdge& be = mesh.side_edges[int(s)][k];
    return 3 * be.elem + (end == 0 ? be.lv0 : be.lv1);
  }
};

SubdomainDofs build_subdomain_dofs(const Partition& part, const std::vector<SubdomainMesh>& meshes,
                                   const Interface& iface, int sub);

/// How primal unknowns are grouped at subdomain corners.
///
/// PairwisePerEdge keeps one pair of equalities per macro-edge endpoint
/// (own value = neighbor's copy of it, per side), merging pairs only when
/// they share a dof. MergeAtCorner additionally identifies every primal dof
/// sitting at the same geometric corner; that constrains more than DG
/// continuity on Gamma allows (element values at a corner stay independent),
/// so it changes the discrete solution and exists for experiments only.
enum class CornerPolicy { PairwisePerEdge, MergeAtCorner };

struct GlobalDofRef {
  int sub = -1;
  int local = -1;
};

/// Global index maps: primal groups, the dual multiplier set, and the
/// (I, Delta, Pi) layout of the subassembled space.
struct SpaceMaps {
  CornerPolicy policy = CornerPolicy::PairwisePerEdge;
  std::vector<SubdomainDofs> subs;

  std::vector<std::vector<GlobalDofRef>> groups;  // primal groups, deterministic order

  struct Multiplier {
    int sub_own = -1, own_local = -1;  // +1 entry
    int sub_tr = -1, tr_local = -1;    // -1 entry (the neighbor's copy)
  };
  std::vector<Multiplier> multipliers;

  /// Column structure of B restricted to one subdomain: (row, delta position, sign).
  struct BEntry {
    int row = -1;
    int dpos = -1;
    double sign = 0.0;
  };
  std::vector<std::vector<BEntry>> b_cols;

  enum class Blk : std::uint8_t { I, D, P };
  struct Ref {
    Blk blk;
    int idx;
  };
  std::vector<std::vector<Ref>> refs;  // per sub, per local dof

  std::vector<int> I_offset, D_offset;
  int n_I = 0, n_D = 0, n_P = 0;

  int n_mult() const { return int(multipliers.size()); }
};

SpaceMaps build_space_maps(const Partition& part, const std::vector<SubdomainMesh>& meshes,
                           const Interface& iface,
                           CornerPolicy policy = CornerPolicy::PairwisePerEdge);

/// Classification dump (dof id -> class, location) for golden tests.
std::string dump_classification_json(const SubdomainDofs& dofs);

}  // namespace fetidg

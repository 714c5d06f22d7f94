#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fetidg/oracle.hpp"
#include "fetidg/refine.hpp"

namespace fetidg {

/// Max sampled ratios of the interpolation-operator energy bounds for one
/// mesh size. Two-sided equivalences carry both directions; one-sided
/// bounds only the forward ratio.
struct InterpRatios {
  int m = 0;
  double a_fwd = 0.0;    // refined volume energy of the forward image / parent
  double a_bwd = 0.0;    // parent / refined
  double p_transfer = 0.0;  // refined penalty vs parent penalty + volume
  double p_back = 0.0;      // parent penalty vs refined penalty + volume
  double edge_fwd = 0.0;    // edge-variant jump L2, refined / parent
  double edge_bwd = 0.0;
  double back_vol = 0.0;  // backward map volume bound (random refined input)
  double back_pen = 0.0;  // backward map penalty bound
  double ident_err = 0.0; // max |I(I_fwd u) - u|, exact identity
  double harm_fwd = 0.0;  // harmonic d-energy, refined / parent
  double harm_bwd = 0.0;
};

/// Samples the interpolation-operator energy ratios on one subdomain of an M x M
/// instance for each mesh size in `ms`. `sub` = -1 picks an interior
/// subdomain when one exists.
std::vector<InterpRatios> run_interp_ratio_suite(int M, const std::vector<int>& ms, int sub, int samples,
                                         std::uint64_t seed);

void write_interp_ratio_csv(std::ostream& os, const std::vector<InterpRatios>& rows);

/// Sampled bounds of a'_i(u,u) against the positive form d_i(u,u).
struct EnergyEquivalence {
  double gamma0 = 0.0;  // min ratio over samples and subdomains
  double gamma1 = 0.0;  // max ratio
  int samples = 0;
};
EnergyEquivalence sample_energy_equivalence(const Problem& p, int samples, std::uint64_t seed);

/// Max sampled violation of <S~ u, u> <= <S'_D u, u> (negative slack means
/// the inequality holds strictly); normalized by <S'_D u, u>.
double dual_schur_slack(const Problem& p, int samples, std::uint64_t seed);

/// Max sampled ratio ||P u||^2_{S'_D} / ||u||^2_{S~}.
double p_delta_energy_ratio(const Problem& p, int samples, std::uint64_t seed);

struct SpectrumCase {
  int M, m;
  double beta, rho_red;
  double lambda_min, lambda_max;
};
/// Dense spectra of M^{-1} F over the verification grid.
std::vector<SpectrumCase> spectrum_grid(const std::vector<int>& Ms, const std::vector<int>& ms,
                                        const std::vector<double>& betas,
                                        const std::vector<double>& jumps);

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumCase>& rows);

}  // namespace fetidg

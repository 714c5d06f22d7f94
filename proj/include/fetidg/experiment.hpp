#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fetidg/problem.hpp"

namespace fetidg {

struct ExperimentConfig {
  int M = 8;
  int m = 8;
  double delta = 10.0;
  double beta = 1.0;
  bool checkerboard = false;
  double rho_const = 1.0;
  double rho_black = 1.0;
  double rho_red = 1.0;
  double tol = 1e-10;
  int max_iters = 500;
  CornerPolicy policy = CornerPolicy::PairwisePerEdge;
  std::uint64_t seed = 12345;
  bool check_vs_direct = false;  // also solve with the direct oracle and compare

  CoefficientField coefficients() const;
  void validate() const;  // throws std::invalid_argument
};

struct ResultRow {
  ExperimentConfig cfg;
  int iters = 0;
  double cond = 1.0;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  double residual = 0.0;        // ||f - A u*|| / ||f||
  double backward_error = 0.0;  // ||f - A u*|| / (||A||_1 ||u*|| + ||f||)
  double jump_scaled = 0.0;     // ||B u_D|| / ||u*||
  double vs_direct = -1.0;      // relative l2 difference to the direct solve
  bool converged = false;
  double seconds = 0.0;
};

/// Full pipeline for one configuration: mesh, assembly, FETI-DP, PCG,
/// recovery and residual cross-checks. Deterministic given the config.
ResultRow run_case(const ExperimentConfig& cfg);

/// Parameter grids of the reported experiment tables (1-5).
std::vector<ResultRow> reproduce_table(int id, bool check_vs_direct = false);

enum class OutputFormat { Csv, Json, Pretty };
OutputFormat parse_format(const std::string& name);  // throws on unknown

std::string emit(const std::vector<ResultRow>& rows, OutputFormat format);

/// Parses one data line of the CSV emitted above (testing hook).
ResultRow parse_csv_row(const std::string& line);

}  // namespace fetidg

#include <doctest.h>

#include <sstream>

#include "fetidg/experiment.hpp"

using namespace fetidg;

TEST_CASE("single case reproduces the reported cell") {
  ExperimentConfig cfg;
  cfg.M = 4;
  cfg.m = 4;
  cfg.check_vs_direct = true;
  ResultRow row = run_case(cfg);
  CHECK(row.converged);
  CHECK(std::abs(row.iters - 13) <= 2);
  CHECK(row.cond == doctest::Approx(2.28).epsilon(0.10));
  CHECK(row.lambda_min >= 1.0 - 1e-6);
  CHECK(row.jump_scaled <= 1e-9);
  CHECK(row.vs_direct <= 1e-8);
  CHECK(row.backward_error <= 1e-11);
}

TEST_CASE("configuration validation") {
  ExperimentConfig cfg;
  cfg.M = 0;
  CHECK_THROWS_AS(run_case(cfg), std::invalid_argument);
  cfg = {};
  cfg.tol = 2.0;
  CHECK_THROWS_AS(run_case(cfg), std::invalid_argument);
  cfg = {};
  cfg.checkerboard = true;
  cfg.M = 1;
  CHECK_THROWS_AS(run_case(cfg), std::invalid_argument);
  cfg = {};
  cfg.rho_const = -1.0;
  CHECK_THROWS_AS(run_case(cfg), std::invalid_argument);
  CHECK_THROWS_AS(parse_format("yaml"), std::invalid_argument);
  CHECK_THROWS_AS(reproduce_table(6), std::invalid_argument);
}

TEST_CASE("single-subdomain and coarse-only runs work end to end") {
  ExperimentConfig cfg;
  cfg.M = 1;
  cfg.m = 2;
  ResultRow row = run_case(cfg);
  CHECK(row.converged);
  CHECK(row.iters == 0);
  CHECK(row.backward_error < 1e-12);

  cfg = {};
  cfg.M = 2;
  cfg.m = 1;  // every interface dof is primal, the dual space is empty
  row = run_case(cfg);
  CHECK(row.converged);
  CHECK(row.iters == 0);
  CHECK(row.backward_error < 1e-12);
}

TEST_CASE("csv emission and round trip") {
  CHECK(emit({}, OutputFormat::Csv) ==
        "M,m,delta,beta,rho_b,rho_r,iters,cond,lmin,lmax,residual,converged,seconds\n");

  ExperimentConfig cfg;
  cfg.M = 2;
  cfg.m = 2;
  cfg.checkerboard = true;
  cfg.rho_black = 1.0;
  cfg.rho_red = 100.0;
  ResultRow row = run_case(cfg);
  std::string csv = emit({row}, OutputFormat::Csv);
  std::istringstream is(csv);
  std::string header, line;
  std::getline(is, header);
  std::getline(is, line);
  ResultRow back = parse_csv_row(line);
  CHECK(back.cfg.M == row.cfg.M);
  CHECK(back.cfg.m == row.cfg.m);
  CHECK(back.cfg.delta == row.cfg.delta);
  CHECK(back.cfg.beta == row.cfg.beta);
  CHECK(back.cfg.checkerboard);
  CHECK(back.cfg.rho_red == 100.0);
  CHECK(back.iters == row.iters);
  CHECK(back.cond == row.cond);
  CHECK(back.lambda_min == row.lambda_min);
  CHECK(back.residual == row.residual);
  CHECK(back.converged == row.converged);
}

TEST_CASE("determinism: identical configs give identical rows") {
  ExperimentConfig cfg;
  cfg.M = 2;
  cfg.m = 4;
  ResultRow a = run_case(cfg);
  ResultRow b = run_case(cfg);
  auto strip_seconds = [](std::string csv) {
    return csv.substr(0, csv.rfind(','));
  };
  std::string la = emit({a}, OutputFormat::Csv), lb = emit({b}, OutputFormat::Csv);
  la = la.substr(la.find('\n') + 1);
  lb = lb.substr(lb.find('\n') + 1);
  CHECK(strip_seconds(la) == strip_seconds(lb));
}

TEST_CASE("json and pretty emission") {
  ResultRow r;
  r.cfg.M = 4;
  r.cfg.m = 8;
  r.iters = 13;
  r.cond = 2.84;
  r.converged = true;
  std::string json = emit({r}, OutputFormat::Json);
  CHECK(json.find("\"iters\": 13") != std::string::npos);

  // a 2x2 grid renders as two rows of iters (cond) cells
  std::vector<ResultRow> rows;
  for (int M : {4, 8})
    for (int m : {4, 8}) {
      ResultRow q;
      q.cfg.M = M;
      q.cfg.m = m;
      q.iters = 10 + m;
      q.cond = 2.0 + 0.1 * M;
      rows.push_back(q);
    }
  std::string pretty = emit(rows, OutputFormat::Pretty);
  CHECK(pretty.find("m=4") != std::string::npos);
  CHECK(pretty.find("M=4") != std::string::npos);
  CHECK(pretty.find("14 (2.40)") != std::string::npos);
  int lines = 0;
  for (char c : pretty)
    if (c == '\n') ++lines;
  CHECK(lines == 3);  // header + 2 grid rows
}

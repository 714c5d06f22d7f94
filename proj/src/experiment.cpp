#include "fetidg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fetidg/oracle.hpp"
#include "fetidg/pcg.hpp"

namespace fetidg {

CoefficientField ExperimentConfig::coefficients() const {
  return checkerboard ? CoefficientField::checkerboard(rho_black, rho_red)
                      : CoefficientField::constant(rho_const);
}

void ExperimentConfig::validate() const {
  if (M < 1) throw std::invalid_argument("config: M must be >= 1");
  if (m < 1) throw std::invalid_argument("config: m must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("config: delta must be positive");
  if (!(beta >= 0.5)) throw std::invalid_argument("config: beta must be >= 1/2");
  if (!(rho_const > 0.0 && rho_black > 0.0 && rho_red > 0.0))
    throw std::invalid_argument("config: coefficients must be positive");
  if (checkerboard && M < 2) throw std::invalid_argument("config: checkerboard requires M >= 2");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("config: tol must be in (0,1)");
  if (max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
}

ResultRow run_case(const ExperimentConfig& cfg) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();

  Problem p = build_problem(cfg.M, cfg.m, cfg.coefficients(), cfg.delta, cfg.beta, cfg.policy);

  ResultRow row;
  row.cfg = cfg;

  Eigen::VectorXd lambda;
  if (p.feti->n_mult() > 0) {
    PcgConfig pcfg;
    pcfg.tol = cfg.tol;
    pcfg.max_iters = cfg.max_iters;
    Eigen::VectorXd g = p.feti->rhs_g();
    auto [sol_lambda, rep] =
        pcg([&](const Eigen::VectorXd& v) { return p.feti->apply_F(v); },
            [&](const Eigen::VectorXd& v) { return p.feti->apply_Minv(v); }, g, pcfg);
    lambda = sol_lambda;
    row.iters = rep.iterations;
    row.cond = rep.cond;
    row.lambda_min = rep.lambda_min;
    row.lambda_max = rep.lambda_max;
    row.converged = rep.converged;
  } else {
    lambda.resize(0);
    row.converged = true;  // coarse-only problem, no dual unknowns
  }

  FetiDpSystem::Solution sol = p.feti->recover(lambda);
  GlobalSystem gs = assemble_global_system(p);
  double rnorm = (gs.f - gs.A * sol.x).norm();
  row.residual = rnorm / gs.f.norm();
  double a_norm1 = 0.0;
  for (int c = 0; c < gs.A.outerSize(); ++c) {
    double col = 0.0;
    for (SpMat::InnerIterator it(gs.A, c); it; ++it) col += std::abs(it.value());
    a_norm1 = std::max(a_norm1, col);
  }
  row.backward_error = rnorm / (a_norm1 * sol.x.norm() + gs.f.norm());
  row.jump_scaled = sol.x.norm() > 0 ? sol.jump_norm / sol.x.norm() : 0.0;

  if (cfg.check_vs_direct) {
    Eigen::VectorXd xd = direct_solve(gs.A, gs.f);
    row.vs_direct = (sol.x - xd).norm() / xd.norm();
  }

  auto t1 = std::chrono::steady_clock::now();
  row.seconds = std::chrono::duration<double>(t1 - t0).count();
  return row;
}

std::vector<ResultRow> reproduce_table(int id, bool check_vs_direct) {
  std::vector<ResultRow> rows;
  ExperimentConfig base;
  base.check_vs_direct = check_vs_direct;

  auto checker = [&](double rho_red) {
    ExperimentConfig c = base;
    c.checkerboard = true;
    c.rho_black = 1.0;
    c.rho_red = rho_red;
    return c;
  };

  switch (id) {
    case 1:
      for (int M : {4, 8, 16})
        for (int m : {4, 8, 16}) {
          ExperimentConfig c = base;
          c.M = M;
          c.m = m;
          rows.push_back(run_case(c));
        }
      break;
    case 2:
      for (int M : {4, 8, 16})
        for (int m : {4, 8, 16}) {
          ExperimentConfig c = checker(1000.0);
          c.M = M;
          c.m = m;
          rows.push_back(run_case(c));
        }
      break;
    case 3:
      for (double rho : {1e4, 1e3, 1e2, 1e1, 1.0, 1e-1, 1e-2, 1e-3, 1e-4})
        for (int m : {2, 4, 8, 16}) {
          ExperimentConfig c = rho == 1.0 ? base : checker(rho);
          c.M = 8;
          c.m = m;
          rows.push_back(run_case(c));
        }
      break;
    case 4:
    case 5:
      for (double rho : {1000.0, 1.0, 0.001})
        for (int m : {2, 4, 8, 16}) {
          ExperimentConfig c = rho == 1.0 ? base : checker(rho);
          c.M = 8;
          c.m = m;
          c.beta = (id == 4) ? 0.5 : 10.0;
          rows.push_back(run_case(c));
        }
      break;
    default:
      throw std::invalid_argument("reproduce_table: id must be 1..5");
  }
  return rows;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "pretty") return OutputFormat::Pretty;
  throw std::invalid_argument("unknown output format: " + name);
}

static const char* kCsvHeader = "M,m,delta,beta,rho_b,rho_r,iters,cond,lmin,lmax,residual,converged,seconds";

static std::string csv_line(const ResultRow& r) {
  char buf[512];
  double rho_b = r.cfg.checkerboard ? r.cfg.rho_black : r.cfg.rho_const;
  double rho_r = r.cfg.checkerboard ? r.cfg.rho_red : r.cfg.rho_const;
  std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%d,%.6g",
                r.cfg.M, r.cfg.m, r.cfg.delta, r.cfg.beta, rho_b, rho_r, r.iters, r.cond,
                r.lambda_min, r.lambda_max, r.residual, r.converged ? 1 : 0, r.seconds);
  return buf;
}

std::string emit(const std::vector<ResultRow>& rows, OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::Csv: {
      os << kCsvHeader << '\n';
      for (const ResultRow& r : rows) os << csv_line(r) << '\n';
      break;
    }
    case OutputFormat::Json: {
      nlohmann::json arr = nlohmann::json::array();
      for (const ResultRow& r : rows) {
        arr.push_back({{"M", r.cfg.M},
                       {"m", r.cfg.m},
                       {"delta", r.cfg.delta},
                       {"beta", r.cfg.beta},
                       {"rho_b", r.cfg.checkerboard ? r.cfg.rho_black : r.cfg.rho_const},
                       {"rho_r", r.cfg.checkerboard ? r.cfg.rho_red : r.cfg.rho_const},
                       {"iters", r.iters},
                       {"cond", r.cond},
                       {"lmin", r.lambda_min},
                       {"lmax", r.lambda_max},
                       {"residual", r.residual},
                       {"converged", r.converged},
                       {"seconds", r.seconds}});
      }
      os << arr.dump(2) << '\n';
      break;
    }
    case OutputFormat::Pretty: {
      // Group rows into a grid: one line per leading parameter (M or rho_r),
      // one column per m, cells as "iters (cond)".
      std::vector<std::pair<std::string, std::vector<const ResultRow*>>> lines;
      std::vector<int> ms;
      for (const ResultRow& r : rows) {
        double rho_r = r.cfg.checkerboard ? r.cfg.rho_red : r.cfg.rho_const;
        char key[64];
        bool by_rho = rows.size() > 1 && rows.front().cfg.M == rows.back().cfg.M;
        if (by_rho)
          std::snprintf(key, sizeof key, "rho_r=%-8g", rho_r);
        else
          std::snprintf(key, sizeof key, "M=%-3d", r.cfg.M);
        if (lines.empty() || lines.back().first != key) lines.push_back({key, {}});
        lines.back().second.push_back(&r);
        if (std::find(ms.begin(), ms.end(), r.cfg.m) == ms.end()) ms.push_back(r.cfg.m);
      }
      os << std::string(12, ' ');
      for (int m : ms) {
        char h[32];
        std::snprintf(h, sizeof h, "m=%-12d", m);
        os << h;
      }
      os << '\n';
      for (auto& [key, cells] : lines) {
        char k[64];
        std::snprintf(k, sizeof k, "%-12s", key.c_str());
        os << k;
        for (const ResultRow* r : cells) {
          char cell[32];
          std::snprintf(cell, sizeof cell, "%2d (%.2f)", r->iters, r->cond);
          char padded[32];
          std::snprintf(padded, sizeof padded, "%-14s", cell);
          os << padded;
        }
        os << '\n';
      }
      break;
    }
  }
  return os.str();
}

ResultRow parse_csv_row(const std::string& line) {
  ResultRow r;
  std::istringstream is(line);
  std::string tok;
  auto next = [&]() {
    if (!std::getline(is, tok, ',')) throw std::invalid_argument("parse_csv_row: short line");
    return tok;
  };
  r.cfg.M = std::stoi(next());
  r.cfg.m = std::stoi(next());
  r.cfg.delta = std::stod(next());
  r.cfg.beta = std::stod(next());
  double rho_b = std::stod(next());
  double rho_r = std::stod(next());
  if (rho_b == rho_r) {
    r.cfg.checkerboard = false;
    r.cfg.rho_const = rho_b;
  } else {
    r.cfg.checkerboard = true;
    r.cfg.rho_black = rho_b;
    r.cfg.rho_red = rho_r;
  }
  r.iters = std::stoi(next());
  r.cond = std::stod(next());
  r.lambda_min = std::stod(next());
  r.lambda_max = std::stod(next());
  r.residual = std::stod(next());
  r.converged = std::stoi(next()) != 0;
  r.seconds = std::stod(next());
  return r;
}

}  // namespace fetidg

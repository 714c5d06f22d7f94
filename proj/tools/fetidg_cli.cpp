#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "fetidg/experiment.hpp"
#include "fetidg/verification.hpp"

using namespace fetidg;

namespace {

// Per-run self-checks: the backward error of the recovered solution must sit
// at machine level and the smallest Ritz value may not undercut the
// preconditioned spectrum's lower bound.
bool row_self_check(const fetidg::ResultRow& row) {
  if (row.backward_error > 1e-11) return false;
  if (row.iters >= 2 && row.lambda_min < 1.0 - 1e-6) return false;
  return true;
}

struct CommonOpts {
  ExperimentConfig cfg;
  std::string format = "pretty";
  double rho_const = 1.0;
  double rho_red = 0.0;    // 0: not set
  double rho_black = 1.0;
};

void add_common(CLI::App* app, CommonOpts& o) {
  app->add_option("--M", o.cfg.M, "subdomains per side");
  app->add_option("--m", o.cfg.m, "fine intervals per side within a subdomain");
  app->add_option("--delta", o.cfg.delta, "interior-penalty parameter");
  app->add_option("--beta", o.cfg.beta, "scaling exponent");
  app->add_option("--rho-const", o.rho_const, "constant coefficient");
  app->add_option("--rho-red", o.rho_red, "checkerboard coefficient on red subdomains");
  app->add_option("--rho-black", o.rho_black, "checkerboard coefficient on black subdomains");
  app->add_option("--tol", o.cfg.tol, "PCG residual reduction");
  app->add_option("--max-iters", o.cfg.max_iters, "PCG iteration cap");
  app->add_option("--format", o.format, "csv | json | pretty");
  app->add_option("--seed", o.cfg.seed, "seed for randomized verification suites");
  app->add_flag_callback(
      "--merged-corners",
      [&o] { o.cfg.policy = CornerPolicy::MergeAtCorner; },
      "experimental: merge all primal values at a geometric corner");
  app->add_flag("--check-direct", o.cfg.check_vs_direct,
                "cross-check the solution against a sparse direct solve");
}

ExperimentConfig finish(CommonOpts& o) {
  if (o.rho_red > 0.0) {
    o.cfg.checkerboard = true;
    o.cfg.rho_black = o.rho_black;
    o.cfg.rho_red = o.rho_red;
  } else {
    o.cfg.checkerboard = false;
    o.cfg.rho_const = o.rho_const;
  }
  return o.cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FETI-DP solver for full interior-penalty DG discretizations on the unit square"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file ([subcommand] sections); explicit flags win");

  CommonOpts solve_opts, table_opts, verify_opts, spectrum_opts;
  int table_id = 1;

  CLI::App* solve = app.add_subcommand("solve", "solve one configuration and report the run");
  add_common(solve, solve_opts);

  CLI::App* table = app.add_subcommand("table", "reproduce one of the reported tables (1-5)");
  table->add_option("id", table_id, "table number")->required()->check(CLI::Range(1, 5));
  add_common(table, table_opts);

  CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
  add_common(verify, verify_opts);

  CLI::App* spectrum = app.add_subcommand("spectrum", "dense spectrum of M^{-1} F");
  add_common(spectrum, spectrum_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      ExperimentConfig cfg = finish(solve_opts);
      ResultRow row = run_case(cfg);
      std::cout << emit({row}, parse_format(solve_opts.format));
      if (!row.converged) return 2;
      if (!row_self_check(row)) {
        std::fprintf(stderr, "self-check failed: backward error %.2e, lambda_min %.8f\n",
                     row.backward_error, row.lambda_min);
        return 3;
      }
    } else if (table->parsed()) {
      ExperimentConfig cfg = finish(table_opts);
      std::vector<ResultRow> rows = reproduce_table(table_id, cfg.check_vs_direct);
      std::cout << emit(rows, parse_format(table_opts.format));
      for (const ResultRow& r : rows) {
        if (!r.converged) return 2;
        if (!row_self_check(r)) {
          std::fprintf(stderr, "self-check failed at M=%d m=%d\n", r.cfg.M, r.cfg.m);
          return 3;
        }
      }
    } else if (verify->parsed()) {
      ExperimentConfig cfg = finish(verify_opts);
      bool ok = true;

      std::vector<InterpRatios> ratios = run_interp_ratio_suite(4, {2, 4, 8, 16}, -1, 100, cfg.seed);
      write_interp_ratio_csv(std::cout, ratios);
      for (size_t i = 0; i < ratios.size(); ++i) {
        if (ratios[i].ident_err > 1e-10) ok = false;
        if (i > 0) {
          auto growth = [&](double a, double b) { return b > 1.10 * a; };
          if (growth(ratios[i - 1].a_fwd, ratios[i].a_fwd) ||
              growth(ratios[i - 1].a_bwd, ratios[i].a_bwd) ||
              growth(ratios[i - 1].harm_fwd, ratios[i].harm_fwd) ||
              growth(ratios[i - 1].harm_bwd, ratios[i].harm_bwd))
            ok = false;
        }
      }

      Problem p = build_problem(cfg.M, cfg.m, cfg.coefficients(), cfg.delta, cfg.beta, cfg.policy);
      EnergyEquivalence eq = sample_energy_equivalence(p, 100, cfg.seed);
      std::printf("energy equivalence: gamma0=%.4f gamma1=%.4f over %d samples\n", eq.gamma0,
                  eq.gamma1, eq.samples);
      if (!(eq.gamma0 > 0.0)) ok = false;

      if (p.feti->n_mult() > 0) {
        double viol = dual_schur_slack(p, 100, cfg.seed);
        std::printf("dual Schur inequality max slack: %.3e\n", viol);
        if (viol > 1e-12) ok = false;
        std::printf("P_Delta energy ratio (sampled): %.4f\n",
                    p_delta_energy_ratio(p, 100, cfg.seed));
      }
      if (!ok) {
        std::puts("verify: FAILED");
        return 1;
      }
      std::puts("verify: ok");
    } else if (spectrum->parsed()) {
      ExperimentConfig cfg = finish(spectrum_opts);
      Problem p = build_problem(cfg.M, cfg.m, cfg.coefficients(), cfg.delta, cfg.beta, cfg.policy);
      if (p.feti->n_mult() > 2000) throw std::invalid_argument("spectrum: instance too large");
      Spectrum sp = dense_preconditioned_spectrum(*p.feti);
      if (parse_format(spectrum_opts.format) == OutputFormat::Csv) {
        std::printf("index,eigenvalue\n");
        for (int i = 0; i < sp.eigenvalues.size(); ++i)
          std::printf("%d,%.15g\n", i, sp.eigenvalues[i]);
      }
      std::printf("n=%d lambda_min=%.12f lambda_max=%.12f cond=%.6f\n", p.feti->n_mult(),
                  sp.lambda_min, sp.lambda_max, sp.lambda_max / sp.lambda_min);
      if (sp.lambda_min < 1.0 - 1e-8) {
        std::puts("spectrum: lower bound violated");
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

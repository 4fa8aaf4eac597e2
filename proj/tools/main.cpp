// fglm: permutation-based graphical significance tests for functional data.
#include <iostream>

#include <CLI11.hpp>

#include "fglm/cli.hpp"
#include "fglm/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Graphical permutation tests for functional general linear models"};
  app.require_subcommand(1);

  fglm::RunConfig test_cfg;
  auto* test = app.add_subcommand("test", "Test interest factors in a functional GLM");
  test->add_option("--data", test_cfg.data_path, "functions CSV (header: id,t_1,...,t_K)")
      ->required();
  test->add_option("--factors", test_cfg.factor_path, "factor table CSV (header: id,<name>,...)")
      ->required();
  test->add_option("--interest", test_cfg.interest, "factor under test (repeatable)");
  test->add_option("--nuisance", test_cfg.nuisance, "factor controlled for (repeatable)");
  test->add_option("--interaction", test_cfg.interactions,
                   "interaction term A:B under test (repeatable)");
  test->add_option("--statistic", test_cfg.statistic, "coeff | pairwise | fmax")
      ->check(CLI::IsMember({"coeff", "pairwise", "fmax"}))
      ->capture_default_str();
  test->add_option("--nperm", test_cfg.nperm, "permutations incl. identity (5000 for figures)")
      ->capture_default_str();
  test->add_option("--alpha", test_cfg.alpha, "significance level")->capture_default_str();
  test->add_option("--seed", test_cfg.seed, "RNG seed")->capture_default_str();
  test->add_flag("--exhaustive-perms", test_cfg.exhaustive,
                 "enumerate all n! permutations (n <= 8)");
  test->add_flag("--only-significant", test_cfg.only_significant,
                 "SVG: draw only panels containing envelope exits");
  test->add_flag("--no-intercept", test_cfg.no_intercept, "drop the nuisance intercept");
  test->add_option("--out-results", test_cfg.out_results, "results CSV path");
  test->add_option("--out-envelope", test_cfg.out_envelope, "envelope CSV path");
  test->add_option("--out-svg", test_cfg.out_svg, "envelope figure (SVG 1.1)");

  fglm::ReproduceConfig rep_cfg;
  auto* rep = app.add_subcommand("reproduce", "Re-estimate a built-in power table");
  rep->add_option("table", rep_cfg.table_id, "t1..t6")->required();
  rep->add_option("--reps", rep_cfg.reps, "Monte-Carlo replications")->capture_default_str();
  rep->add_option("--nperm", rep_cfg.nperm, "permutations per replication")
      ->capture_default_str();
  rep->add_option("--alpha", rep_cfg.alpha, "significance level")->capture_default_str();
  rep->add_option("--seed", rep_cfg.seed, "RNG seed")->capture_default_str();
  rep->add_option("--method", rep_cfg.methods, "getp | getdp | fmax (repeatable; default all)");
  rep->add_option("--sigma", rep_cfg.sigmas, "error sd level (repeatable; default catalog)");
  rep->add_option("--out", rep_cfg.out_csv, "power table CSV path");

  fglm::SimulateConfig sim_cfg;
  auto* sim = app.add_subcommand("simulate", "Draw one dataset from a scenario");
  sim->add_option("scenario", sim_cfg.scenario, "catalog name (e.g. t1m3) or scenario JSON path")
      ->required();
  sim->add_option("--sigma", sim_cfg.sigma, "override the scenario's error sd");
  sim->add_option("--seed", sim_cfg.seed, "RNG seed")->capture_default_str();
  sim->add_option("--out-prefix", sim_cfg.out_prefix,
                  "writes <prefix>_functions.csv and <prefix>_factors.csv")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (test->parsed()) return fglm::cmd_test(test_cfg, std::cout);
    if (rep->parsed()) return fglm::cmd_reproduce(rep_cfg, std::cout);
    if (sim->parsed()) return fglm::cmd_simulate(sim_cfg, std::cout);
  } catch (const fglm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

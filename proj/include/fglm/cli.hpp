#ifndef FGLM_CLI_HPP
#define FGLM_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fglm/csv.hpp"
#include "fglm/envelope.hpp"
#include "fglm/simulate.hpp"
#include "fglm/stats.hpp"
#include "fglm/types.hpp"

namespace fglm {

/// One `test` run: data + factor tables in, results/envelope CSVs and an SVG
/// figure out.
struct RunConfig {
  std::string data_path;
  std::string factor_path;
  std::vector<std::string> interest;      ///< factor names under test
  std::vector<std::string> nuisance;      ///< factor names controlled for
  std::vector<std::string> interactions;  ///< "A:B" terms, tested as interest
  std::string statistic = "coeff";        ///< coeff | pairwise | fmax
  Index nperm = 1000;                     ///< total permutations, identity included
  double alpha = 0.05;
  std::uint64_t seed = 1;
  bool exhaustive = false;        ///< enumerate all n! permutations (small n)
  bool only_significant = false;  ///< SVG: keep only panels containing exits
  bool no_intercept = false;
  std::string out_results;   ///< results CSV path ("" skips the file)
  std::string out_envelope;  ///< envelope CSV path
  std::string out_svg;       ///< SVG path
};

/// Everything a `test` run produced, for in-process use.
struct TestRun {
  TestOutcome outcome;
  TestVectorMatrix vectors;  ///< observed row 0 (F-max: single observed F curve)
  EnvelopeResult envelope;   ///< F-max: band [0, critical value]
};

/// Loads, fits, permutes and tests; writes whichever output paths are set.
TestRun run_test(const RunConfig& cfg);
int cmd_test(const RunConfig& cfg, std::ostream& log);

struct ReproduceConfig {
  std::string table_id;  ///< t1..t6
  Index reps = 1000;
  Index nperm = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::vector<std::string> methods;  ///< subset of getp/getdp/fmax; empty = all
  std::vector<double> sigmas;        ///< empty = the table's catalog values
  std::string out_csv;
};

/// Re-estimates one catalog table of rejection rates and writes it as CSV.
PowerTable run_reproduce(const ReproduceConfig& cfg, std::ostream& log);
int cmd_reproduce(const ReproduceConfig& cfg, std::ostream& log);

struct SimulateConfig {
  std::string scenario;      ///< catalog name (t1m3) or JSON file path
  double sigma = 0;          ///< >0 overrides the scenario's error sd
  std::uint64_t seed = 1;
  std::string out_prefix = "sim";  ///< writes <prefix>_functions.csv, <prefix>_factors.csv
};

/// Draws one dataset from a scenario and writes it in `test`-ready form.
int cmd_simulate(const SimulateConfig& cfg, std::ostream& log);

} // namespace fglm

#endif

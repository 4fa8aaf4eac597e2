#include "fglm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include "fglm/design.hpp"
#include "fglm/errors.hpp"
#include "fglm/fit.hpp"
#include "fglm/permute.hpp"
#include "fglm/svg.hpp"

namespace fglm {
namespace {

/// Display band for the F-max test: [0, crit] where crit is the
/// (floor(I*alpha)+1)-th largest permutation maximum.  The observed maximum
/// exceeds crit exactly when p <= alpha, mirroring the rank envelope.
EnvelopeResult fmax_band(const FMaxResult& fm, const TestVectorMatrix& tv, double alpha) {
  const Index i = fm.max_distribution.size();
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must lie strictly between 0 and 1");
  const Index n_drop = static_cast<Index>(std::floor(static_cast<double>(i) * alpha));
  if (n_drop < 1)
    throw AlphaTooSmallError("alpha < 1/I: no permutation maximum may be dropped, increase nperm");

  Vector sorted = fm.max_distribution;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<double>());
  const double crit = sorted[n_drop];

  EnvelopeResult env;
  env.p_value = fm.p_value;
  env.alpha = alpha;
  env.i_count = i;
  env.low = Vector::Zero(tv.l());
  env.upp = Vector::Constant(tv.l(), crit);
  for (Index e = 0; e < tv.l(); ++e)
    if (tv.rows(0, e) > crit) env.exits.push_back(e);
  env.rejected = !env.exits.empty();
  for (Index e : env.exits) env.exit_labels.push_back(tv.element_label(e));
  return env;
}

std::string quote_if_needed(const std::string& arg) {
  if (arg.find_first_of(" \t\"") == std::string::npos) return arg;
  std::string out = "\"";
  for (char c : arg) {
    if (c == '"') out += '\\';
    out += c;
  }
  return out + "\"";
}

} // namespace

TestRun run_test(const RunConfig& cfg) {
  if (cfg.statistic != "coeff" && cfg.statistic != "pairwise" && cfg.statistic != "fmax")
    throw ConfigError("unknown statistic '" + cfg.statistic + "' (expected coeff, pairwise or fmax)");
  if (cfg.interest.empty() && cfg.interactions.empty())
    throw ConfigError("no interest factor given (use --interest or --interaction)");
  if (!(cfg.alpha > 0 && cfg.alpha < 1)) throw ConfigError("alpha must lie strictly between 0 and 1");
  if (!cfg.exhaustive && cfg.nperm < 20)
    throw ConfigError("need at least 20 permutations (got " + std::to_string(cfg.nperm) + ")");

  const FunctionalSample sample = load_functions(cfg.data_path);
  const std::vector<Factor> factors = align_factors(sample, load_factors(cfg.factor_path));

  ModelSpec spec;
  spec.interest = cfg.interest;
  spec.interest.insert(spec.interest.end(), cfg.interactions.begin(), cfg.interactions.end());
  spec.nuisance = cfg.nuisance;
  spec.include_intercept = !cfg.no_intercept;

  const DesignPair design = build_design(spec, factors, sample.n());
  const PermutationSet perms = cfg.exhaustive
                                   ? exhaustive_permutations(sample.n())
                                   : generate_permutations(sample.n(), cfg.nperm, cfg.seed);
  const PermutationGlm batch = freedman_lane_glm(sample, design, perms);

  TestRun run;
  if (cfg.statistic == "fmax") {
    const FMaxResult fm = f_max_test(batch);
    TestVectorMatrix tv;
    tv.rows = fm.observed_f.transpose();
    tv.layout = VectorLayout::coefficients;
    tv.panels = 1;
    tv.k = batch.k;
    tv.panel_labels = {"F"};
    tv.grid = batch.grid;
    run.vectors = tv;
    run.envelope = fmax_band(fm, tv, cfg.alpha);
  } else {
    run.vectors = cfg.statistic == "pairwise" ? test_vector_pairwise(batch)
                                              : test_vector_coeff(batch);
    run.envelope = global_envelope_test(run.vectors, cfg.alpha);
  }

  run.outcome.statistic = cfg.statistic;
  run.outcome.p_value = run.envelope.p_value;
  run.outcome.i_count = run.envelope.i_count;
  // The p-value is the authoritative decision; the envelope exit set can
  // disagree only on exact boundary ties.
  run.outcome.rejected = run.envelope.p_value <= cfg.alpha * (1 + 1e-12);
  run.outcome.alpha = cfg.alpha;
  run.outcome.seed = cfg.seed;
  run.outcome.exhaustive = cfg.exhaustive;
  run.outcome.exit_labels = run.envelope.exit_labels;

  if (!cfg.out_results.empty()) write_results_csv(run.outcome, cfg.out_results);
  if (!cfg.out_envelope.empty()) write_envelope_csv(run.vectors, run.envelope, cfg.out_envelope);
  if (!cfg.out_svg.empty()) {
    SvgOptions opts;
    opts.only_significant = cfg.only_significant;
    opts.title = cfg.statistic + ": p " +
                 (p_value_display(run.outcome.p_value, run.outcome.i_count)[0] == '<' ? "" : "= ") +
                 p_value_display(run.outcome.p_value, run.outcome.i_count);
    write_envelope_svg(run.vectors, run.envelope, opts, cfg.out_svg);
  }
  return run;
}

int cmd_test(const RunConfig& cfg, std::ostream& log) {
  const TestRun run = run_test(cfg);
  log << "statistic " << cfg.statistic << ", " << run.outcome.i_count << " permutations"
      << (cfg.exhaustive ? " (exhaustive)" : "") << "\n";
  log << "p-value " << p_value_display(run.outcome.p_value, run.outcome.i_count) << " -> "
      << (run.outcome.rejected ? "rejected" : "not rejected") << " at alpha = " << cfg.alpha
      << "\n";
  if (run.envelope.exits.empty()) {
    log << "observed curve stays inside the envelope\n";
  } else {
    log << run.envelope.exits.size() << " envelope exit(s):";
    const std::size_t show = std::min<std::size_t>(run.envelope.exit_labels.size(), 8);
    for (std::size_t e = 0; e < show; ++e) log << " " << run.envelope.exit_labels[e];
    if (run.envelope.exit_labels.size() > show)
      log << " (+" << run.envelope.exit_labels.size() - show << " more)";
    log << "\n";
  }
  for (const auto& path : {cfg.out_results, cfg.out_envelope, cfg.out_svg})
    if (!path.empty()) log << "wrote " << path << "\n";
  return 0;
}

PowerTable run_reproduce(const ReproduceConfig& cfg, std::ostream& log) {
  const std::vector<Scenario> scenarios = builtin_table(cfg.table_id);
  const std::vector<double> sigmas =
      cfg.sigmas.empty() ? table_sigmas(cfg.table_id) : cfg.sigmas;

  std::vector<Method> methods;
  if (cfg.methods.empty())
    methods = {Method::getp, Method::getdp, Method::fmax};
  else
    for (const auto& name : cfg.methods) methods.push_back(method_from_name(name));

  PowerTable table;
  // One scenario at a time, purely for progress reporting: replication RNG
  // streams are keyed by (scenario, sigma, rep), so the split changes nothing.
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const PowerTable part =
        run_power_study({scenarios[s]}, methods, sigmas, cfg.reps, cfg.nperm, cfg.alpha, cfg.seed);
    table.cells.insert(table.cells.end(), part.cells.begin(), part.cells.end());
    table.reps = part.reps;
    table.nperm = part.nperm;
    table.alpha = part.alpha;
    table.seed = part.seed;
    log << "[" << s + 1 << "/" << scenarios.size() << "] " << scenarios[s].name << " done\n";
  }
  return table;
}

int cmd_reproduce(const ReproduceConfig& cfg, std::ostream& log) {
  const PowerTable table = run_reproduce(cfg, log);

  // Rows are (scenario, method) in first-appearance order, columns are the
  // sigma levels.
  std::vector<std::pair<std::string, Method>> rows;
  std::vector<double> cols;
  std::map<std::pair<std::string, int>, std::map<double, const PowerCell*>> grid;
  for (const auto& cell : table.cells) {
    const auto row_key = std::make_pair(cell.scenario, cell.method);
    if (std::find(rows.begin(), rows.end(), row_key) == rows.end()) rows.push_back(row_key);
    if (std::find(cols.begin(), cols.end(), cell.sigma) == cols.end()) cols.push_back(cell.sigma);
    grid[{cell.scenario, static_cast<int>(cell.method)}][cell.sigma] = &cell;
  }

  log << "\nrejection rates (" << table.reps << " replications, " << table.nperm
      << " permutations, alpha " << table.alpha << ", seed " << table.seed << ")\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-10s %-6s", "scenario", "method");
  log << buf;
  for (double s : cols) {
    std::snprintf(buf, sizeof(buf), "  sigma=%-5g", s);
    log << buf;
  }
  log << "\n";
  for (const auto& [scenario, method] : rows) {
    std::snprintf(buf, sizeof(buf), "%-10s %-6s", scenario.c_str(),
                  method_name(method).c_str());
    log << buf;
    for (double s : cols) {
      const auto& by_sigma = grid[{scenario, static_cast<int>(method)}];
      const auto it = by_sigma.find(s);
      if (it == by_sigma.end() || !it->second->applicable)
        std::snprintf(buf, sizeof(buf), "  %-10s", "NA");
      else
        std::snprintf(buf, sizeof(buf), "  %-10.3f", it->second->power);
      log << buf;
    }
    log << "\n";
  }

  if (!cfg.out_csv.empty()) {
    write_power_csv(table, cfg.out_csv);
    log << "wrote " << cfg.out_csv << "\n";
  }
  return 0;
}

int cmd_simulate(const SimulateConfig& cfg, std::ostream& log) {
  Scenario sc;
  const bool looks_like_path = cfg.scenario.find('/') != std::string::npos ||
                               cfg.scenario.find('.') != std::string::npos;
  if (!looks_like_path) {
    sc = builtin_scenario(cfg.scenario);
  } else if (std::filesystem::exists(cfg.scenario)) {
    sc = load_scenario_file(cfg.scenario);
  } else {
    throw ConfigError("scenario file '" + cfg.scenario + "' does not exist");
  }
  if (cfg.sigma > 0) sc.error.sigma = cfg.sigma;
  validate_scenario(sc);

  const SimulatedData data = simulate_dataset(sc, cfg.seed);
  const std::string functions_path = cfg.out_prefix + "_functions.csv";
  const std::string factors_path = cfg.out_prefix + "_factors.csv";
  save_functions(data.sample, functions_path);
  FactorTable table;
  table.ids = data.sample.ids;
  table.factors = data.factors;
  save_factors(table, factors_path);

  log << "scenario " << sc.name << ": " << data.sample.n() << " functions on "
      << data.sample.k() << " grid points (error sd " << sc.error.sigma << ", seed " << cfg.seed
      << ")\n";
  log << "wrote " << functions_path << "\n";
  log << "wrote " << factors_path << "\n";

  std::string hint = "fglm test --data " + quote_if_needed(functions_path) + " --factors " +
                     quote_if_needed(factors_path);
  for (const auto& term : data.model.interest)
    hint += term.find(':') != std::string::npos ? " --interaction " + term : " --interest " + term;
  for (const auto& term : data.model.nuisance) hint += " --nuisance " + term;
  log << "analyse with: " << hint << "\n";
  return 0;
}

} // namespace fglm

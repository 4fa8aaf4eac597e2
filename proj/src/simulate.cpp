#include "fglm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "fglm/design.hpp"
#include "fglm/envelope.hpp"
#include "fglm/errors.hpp"
#include "fglm/parallel.hpp"
#include "fglm/rng.hpp"
#include "fglm/stats.hpp"

namespace fglm {

double model_function(double peak, double bump, double arch, double t) {
  const double sharp = 5.0 + 2.0 * peak;
  const double early = 3.0 * sharp * t * std::pow(1.0 - t, sharp);
  const double late = std::pow(std::max(0.0, 64.0 * (1.0 - t) * (t - 0.75)), bump);
  return early + late + t * (1.0 - t) * arch / 100.0;
}

Vector gen_iid_error(double sigma, Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, sigma);
  Vector e(k);
  for (Index m = 0; m < k; ++m) e[m] = normal(rng);
  return e;
}

Vector gen_brownian_error(double sigma_at_one, Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, sigma_at_one / std::sqrt(static_cast<double>(k)));
  Vector e(k);
  double sum = 0.0;
  for (Index m = 0; m < k; ++m) {
    sum += normal(rng);
    e[m] = sum;
  }
  return e;
}

namespace {

const char* param_label(int p) { return p == 0 ? "peak" : p == 1 ? "bump" : "arch"; }

void validate_param(const ParamSpec& spec, int which, Index groups) {
  const bool needs_values = !spec.range || !spec.feeds_model;
  if (needs_values && static_cast<Index>(spec.values.size()) != groups)
    throw ConfigError(std::string("parameter '") + param_label(which) + "' needs " +
                      std::to_string(groups) + " per-group values");
  if (spec.range && !((*spec.range)[0] <= (*spec.range)[1]))
    throw ConfigError(std::string("parameter '") + param_label(which) + "' has an empty range");
  if (which == 1) {
    // The late bump is (...)^bump with base 0 left of t = 3/4; exponents
    // below 1 would blow the curve up there.
    for (double v : spec.values)
      if (v < 1.0) throw ConfigError("late-bump exponent must be >= 1");
    if (spec.range && spec.feeds_model && (*spec.range)[0] < 1.0)
      throw ConfigError("late-bump exponent range must start at >= 1");
  }
}

} // namespace

void validate_scenario(const Scenario& sc) {
  if (sc.group_count < 1 || sc.per_group < 1)
    throw ConfigError("scenario '" + sc.name + "': needs at least one group and one function");
  if (sc.grid_size < 2) throw ConfigError("scenario '" + sc.name + "': grid needs >= 2 points");
  if (!(sc.error.sigma > 0))
    throw ConfigError("scenario '" + sc.name + "': error sd must be positive");
  validate_param(sc.peak, 0, sc.group_count);
  validate_param(sc.bump, 1, sc.group_count);
  validate_param(sc.arch, 2, sc.group_count);

  for (const auto& b : sc.factors) {
    const bool categorical = !b.levels_by_group.empty();
    if (categorical == b.param.has_value())
      throw ConfigError("factor '" + b.name +
                        "': bind either levels_by_group or a parameter, not both");
    if (categorical && static_cast<Index>(b.levels_by_group.size()) != sc.group_count)
      throw ConfigError("factor '" + b.name + "': needs one level per group");
    if (b.param && (*b.param < 0 || *b.param > 2))
      throw ConfigError("factor '" + b.name + "': parameter index out of range");
    if (b.param) {
      const ParamSpec& p = *b.param == 0 ? sc.peak : *b.param == 1 ? sc.bump : sc.arch;
      if (!p.range)
        throw ConfigError("factor '" + b.name +
                          "': continuous binding needs a drawn parameter");
    }
  }
  auto declared = [&](const std::string& name) {
    return std::any_of(sc.factors.begin(), sc.factors.end(),
                       [&](const FactorBinding& b) { return b.name == name; });
  };
  for (const auto& terms : {sc.interest, sc.nuisance})
    for (const auto& term : terms)
      for (std::size_t from = 0, pos = 0; pos <= term.size(); ++pos)
        if (pos == term.size() || term[pos] == ':') {
          const std::string part = term.substr(from, pos - from);
          if (!declared(part))
            throw ConfigError("scenario '" + sc.name + "': model term '" + term +
                              "' refers to undeclared factor '" + part + "'");
          from = pos + 1;
        }
  if (sc.interest.empty())
    throw ConfigError("scenario '" + sc.name + "': no interest term");
}

SimulatedData simulate_dataset(const Scenario& sc, std::uint64_t seed) {
  validate_scenario(sc);
  const Index n = sc.n(), k = sc.grid_size;

  Vector grid(k);
  for (Index m = 0; m < k; ++m)
    grid[m] = static_cast<double>(m) / static_cast<double>(k - 1);

  std::mt19937_64 rng(stream_seed(seed, 0));
  Matrix values(n, k);
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  // Recorded per-function knob values back the continuous covariates.
  Matrix recorded(n, 3);

  const ParamSpec* specs[3] = {&sc.peak, &sc.bump, &sc.arch};
  Index row = 0;
  for (Index g = 0; g < sc.group_count; ++g) {
    for (Index r = 0; r < sc.per_group; ++r, ++row) {
      ids.push_back("g" + std::to_string(g + 1) + "_" + std::to_string(r + 1));
      double knobs[3];
      for (int p = 0; p < 3; ++p) {
        const ParamSpec& spec = *specs[p];
        if (spec.range) {
          std::uniform_real_distribution<double> u((*spec.range)[0], (*spec.range)[1]);
          const double draw = u(rng);
          recorded(row, p) = draw;
          knobs[p] = spec.feeds_model ? draw : spec.values[static_cast<std::size_t>(g)];
        } else {
          knobs[p] = spec.values[static_cast<std::size_t>(g)];
          recorded(row, p) = knobs[p];
        }
      }
      const Vector err = sc.error.kind == ErrorKind::iid
                             ? gen_iid_error(sc.error.sigma, k, rng)
                             : gen_brownian_error(sc.error.sigma, k, rng);
      for (Index m = 0; m < k; ++m)
        values(row, m) = model_function(knobs[0], knobs[1], knobs[2], grid[m]) + err[m];
    }
  }

  SimulatedData out{FunctionalSample(std::move(grid), std::move(values), std::move(ids)), {}, {}};
  for (const auto& b : sc.factors) {
    if (b.param) {
      std::vector<double> vals(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = recorded(i, *b.param);
      out.factors.push_back(Factor::continuous(b.name, std::move(vals)));
    } else {
      std::vector<std::string> obs;
      obs.reserve(static_cast<std::size_t>(n));
      for (Index g = 0; g < sc.group_count; ++g)
        obs.insert(obs.end(), static_cast<std::size_t>(sc.per_group),
                   b.levels_by_group[static_cast<std::size_t>(g)]);
      out.factors.push_back(Factor::categorical(b.name, obs));
    }
  }
  out.model.interest = sc.interest;
  out.model.nuisance = sc.nuisance;
  return out;
}

// --- catalog ---------------------------------------------------------------

namespace {

constexpr double kArchOff[6] = {1, 1, 1, 1, 1, 1};
constexpr double kArchOn[6] = {1, 1, 1, 50, 50, 50};

std::vector<double> vec6(const double (&v)[6]) { return {v, v + 6}; }

// Level names stay non-numeric so that a factor-table round trip through CSV
// keeps these factors categorical (all-numeric columns load as continuous).
FactorBinding group3() {
  return {"group", {"g1", "g2", "g3", "g1", "g2", "g3"}, std::nullopt};
}
FactorBinding block2() {
  return {"block", {"b1", "b1", "b1", "b2", "b2", "b2"}, std::nullopt};
}
FactorBinding continuous_of(const std::string& name, int param) {
  FactorBinding b;
  b.name = name;
  b.param = param;
  return b;
}

Scenario base_scenario(const std::string& name) {
  Scenario sc;
  sc.name = name;
  sc.peak.values = vec6({1, 1, 1, 1, 1, 1});
  sc.bump.values = vec6({1, 1, 1, 1, 1, 1});
  sc.arch.values = vec6({1, 1, 1, 1, 1, 1});
  return sc;
}

// Categorical interest (3 groups) with a two-level nuisance block; effects
// enter through the early peak (m3, m4) or the late bump (m5, m6), the
// nuisance through the arch.
std::vector<Scenario> table1() {
  std::vector<Scenario> t;
  for (int m = 1; m <= 6; ++m) {
    Scenario sc = base_scenario("t1m" + std::to_string(m));
    sc.factors = {group3(), block2()};
    sc.interest = {"group"};
    sc.nuisance = {"block"};
    if (m == 3 || m == 4) sc.peak.values = vec6({0, 1, 2, 0, 1, 2});
    if (m == 5 || m == 6) sc.bump.values = vec6({1, 2, 4, 1, 2, 4});
    if (m == 2 || m == 4 || m == 6) sc.arch.values = vec6(kArchOn);
    sc.truth.interest_effect = m >= 3;
    sc.truth.nuisance_effect = m % 2 == 0;
    t.push_back(std::move(sc));
  }
  return t;
}

// Continuous interest (arch knob drawn on [0,100]); under the null the
// covariate is recorded but the curves are generated with the knob fixed.
std::vector<Scenario> table2() {
  std::vector<Scenario> t;
  for (int m = 1; m <= 6; ++m) {
    Scenario sc = base_scenario("t2m" + std::to_string(m));
    sc.arch.range = {{0.0, 100.0}};
    sc.arch.feeds_model = m >= 3;
    sc.factors = {continuous_of("dose", 2)};
    sc.interest = {"dose"};
    if (m == 5) {
      sc.peak.range = {{0.0, 2.0}};
      sc.factors.push_back(continuous_of("cov", 0));
      sc.nuisance = {"cov"};
    } else {
      sc.factors.push_back(group3());
      sc.nuisance = {"group"};
      if (m == 2 || m == 4) sc.peak.values = vec6({0, 1, 2, 0, 1, 2});
      if (m == 6) sc.bump.values = vec6({1, 2, 4, 1, 2, 4});
    }
    sc.truth.interest_effect = m >= 3;
    sc.truth.nuisance_effect = m == 2 || m >= 4;
    t.push_back(std::move(sc));
  }
  return t;
}

// Interaction interest above both categorical main effects.
std::vector<Scenario> table3() {
  std::vector<Scenario> t;
  for (int m = 1; m <= 4; ++m) {
    Scenario sc = base_scenario("t3m" + std::to_string(m));
    sc.factors = {group3(), block2()};
    sc.interest = {"group:block"};
    sc.nuisance = {"group", "block"};
    sc.peak.values = m % 2 == 1 ? vec6({0, 1, 2, 0, 1, 2}) : vec6({0, 1, 2, 1, 1, 1});
    if (m <= 2)
      sc.arch.values = vec6(kArchOn);
    else
      sc.bump.values = vec6({1, 1, 1, 2, 2, 2});
    sc.truth.interest_effect = m % 2 == 0;
    sc.truth.nuisance_effect = true;
    t.push_back(std::move(sc));
  }
  return t;
}

} // namespace

std::vector<std::string> builtin_tables() { return {"t1", "t2", "t3", "t4", "t5", "t6"}; }

std::vector<Scenario> builtin_table(const std::string& table_id) {
  std::vector<Scenario> t;
  if (table_id == "t1")
    t = table1();
  else if (table_id == "t2")
    t = table2();
  else if (table_id == "t3")
    t = table3();
  else if (table_id == "t4" || table_id == "t5" || table_id == "t6") {
    // Brownian twins of t1-t3.
    const std::string base = table_id == "t4" ? "t1" : table_id == "t5" ? "t2" : "t3";
    t = builtin_table(base);
    for (auto& sc : t) {
      sc.name = table_id + sc.name.substr(2);
      sc.error.kind = ErrorKind::brownian;
      sc.error.sigma = 3.0;
    }
  } else {
    throw UnknownTableError("unknown table '" + table_id + "' (expected t1..t6)");
  }
  return t;
}

std::vector<double> table_sigmas(const std::string& table_id) {
  if (table_id == "t1" || table_id == "t2" || table_id == "t3") return {0.3, 0.5, 0.8};
  if (table_id == "t4" || table_id == "t5" || table_id == "t6") return {3, 5, 8};
  throw UnknownTableError("unknown table '" + table_id + "' (expected t1..t6)");
}

Scenario builtin_scenario(const std::string& name) {
  if (name.size() >= 2) {
    for (const auto& sc : builtin_table(name.substr(0, 2)))
      if (sc.name == name) return sc;
  }
  throw UnknownTableError("unknown scenario '" + name + "' (expected e.g. t1m3)");
}

// --- JSON scenario files ----------------------------------------------------

namespace {

ParamSpec param_from_json(const nlohmann::json& j, Index groups) {
  ParamSpec p;
  if (j.contains("values")) p.values = j.at("values").get<std::vector<double>>();
  if (j.contains("range")) {
    const auto r = j.at("range").get<std::vector<double>>();
    if (r.size() != 2) throw ParseError("parameter range must be [lo, hi]");
    p.range = {{r[0], r[1]}};
  }
  p.feeds_model = j.value("feeds_model", true);
  // A fixed or inert parameter defaults to 1 in every group.
  if (p.values.empty() && (!p.range || !p.feeds_model))
    p.values.assign(static_cast<std::size_t>(groups), 1.0);
  return p;
}

int param_index(const std::string& label) {
  if (label == "peak") return 0;
  if (label == "bump") return 1;
  if (label == "arch") return 2;
  throw ParseError("unknown parameter '" + label + "' (expected peak, bump or arch)");
}

} // namespace

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("scenario file '" + path + "': " + e.what());
  }

  try {
    Scenario sc;
    sc.name = j.value("name", "custom");
    sc.group_count = j.value("groups", 6);
    sc.per_group = j.value("per_group", 10);
    sc.grid_size = j.value("grid_size", 100);
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    const nlohmann::json empty = nlohmann::json::object();
    sc.peak = param_from_json(params.value("peak", empty), sc.group_count);
    sc.bump = param_from_json(params.value("bump", empty), sc.group_count);
    sc.arch = param_from_json(params.value("arch", empty), sc.group_count);
    if (sc.bump.values.empty() && !sc.bump.range)
      sc.bump.values.assign(static_cast<std::size_t>(sc.group_count), 1.0);
    if (j.contains("error")) {
      const auto& e = j.at("error");
      const std::string kind = e.value("kind", "iid");
      if (kind == "iid")
        sc.error.kind = ErrorKind::iid;
      else if (kind == "brownian")
        sc.error.kind = ErrorKind::brownian;
      else
        throw ParseError("unknown error kind '" + kind + "'");
      sc.error.sigma = e.value("sigma", 0.3);
    }
    for (const auto& f : j.value("factors", nlohmann::json::array())) {
      FactorBinding b;
      b.name = f.at("name").get<std::string>();
      if (f.contains("levels_by_group"))
        b.levels_by_group = f.at("levels_by_group").get<std::vector<std::string>>();
      if (f.contains("param")) b.param = param_index(f.at("param").get<std::string>());
      sc.factors.push_back(std::move(b));
    }
    sc.interest = j.value("interest", std::vector<std::string>{});
    sc.nuisance = j.value("nuisance", std::vector<std::string>{});
    if (j.contains("truth")) {
      sc.truth.interest_effect = j.at("truth").value("interest_effect", false);
      sc.truth.nuisance_effect = j.at("truth").value("nuisance_effect", false);
    }
    validate_scenario(sc);
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("scenario file '" + path + "': " + e.what());
  }
}

// --- power study -------------------------------------------------------------

std::string method_name(Method m) {
  switch (m) {
    case Method::getp: return "getp";
    case Method::getdp: return "getdp";
    case Method::fmax: return "fmax";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "getp") return Method::getp;
  if (name == "getdp") return Method::getdp;
  if (name == "fmax") return Method::fmax;
  throw ConfigError("unknown method '" + name + "' (expected getp, getdp or fmax)");
}

namespace {

// Stable 64-bit name hash (FNV-1a) so replication streams are keyed by the
// scenario identity, not by its position in the list.
std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

struct RepOutcome {
  bool reject[3] = {false, false, false};
  bool applicable[3] = {true, true, true};
};

} // namespace

PowerTable run_power_study(const std::vector<Scenario>& scenarios,
                           const std::vector<Method>& methods,
                           const std::vector<double>& sigmas, Index reps, Index nperm,
                           double alpha, std::uint64_t seed) {
  if (reps < 1) throw ConfigError("power study needs at least one replication");
  if (nperm < 20) throw ConfigError("power study needs at least 20 permutations");
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must lie in (0, 1)");
  if (methods.empty()) throw ConfigError("no methods selected");
  for (const auto& sc : scenarios) validate_scenario(sc);

  struct Task {
    const Scenario* scenario;
    double sigma;
    Index cell;  // (scenario, sigma) pair index
  };
  std::vector<Task> cells;
  for (const auto& sc : scenarios)
    for (double sigma : sigmas)
      cells.push_back({&sc, sigma, static_cast<Index>(cells.size())});

  std::vector<RepOutcome> outcomes(cells.size() * static_cast<std::size_t>(reps));

  const Index total = static_cast<Index>(cells.size()) * reps;
  parallel_for(0, total, [&](Index task) {
    const Task& cell = cells[static_cast<std::size_t>(task / reps)];
    const Index rep = task % reps;

    Scenario sc = *cell.scenario;
    sc.error.sigma = cell.sigma;
    const std::uint64_t scen_key = name_hash(sc.name);
    const std::uint64_t sigma_key = splitmix64(
        static_cast<std::uint64_t>(std::llround(cell.sigma * 4096.0)));
    const std::uint64_t data_seed =
        stream_seed(seed, scen_key, sigma_key, static_cast<std::uint64_t>(2 * rep));
    const std::uint64_t perm_seed =
        stream_seed(seed, scen_key, sigma_key, static_cast<std::uint64_t>(2 * rep + 1));

    const SimulatedData data = simulate_dataset(sc, data_seed);
    const DesignPair design = build_design(data.model, data.factors, data.sample.n());
    const PermutationSet perms = generate_permutations(data.sample.n(), nperm, perm_seed);
    const PermutationGlm batch = freedman_lane_glm(data.sample, design, perms);

    RepOutcome& out =
        outcomes[static_cast<std::size_t>(cell.cell) * static_cast<std::size_t>(reps) +
                 static_cast<std::size_t>(rep)];
    // Same padded comparison as the test verb: p is a ratio of counts, so a
    // mathematical tie with alpha must count as a rejection despite rounding.
    const double alpha_pad = alpha * (1 + 1e-12);
    for (Method m : methods) {
      const int mi = static_cast<int>(m);
      switch (m) {
        case Method::getp: {
          const EnvelopeResult r = global_envelope_test(test_vector_coeff(batch), alpha);
          out.reject[mi] = r.p_value <= alpha_pad;
          break;
        }
        case Method::getdp: {
          if (batch.j < 2) {
            out.applicable[mi] = false;
            break;
          }
          const EnvelopeResult r = global_envelope_test(test_vector_pairwise(batch), alpha);
          out.reject[mi] = r.p_value <= alpha_pad;
          break;
        }
        case Method::fmax: {
          out.reject[mi] = f_max_test(batch).p_value <= alpha_pad;
          break;
        }
      }
    }
  });

  PowerTable table;
  table.reps = reps;
  table.nperm = nperm;
  table.alpha = alpha;
  table.seed = seed;
  for (const auto& cell : cells) {
    for (Method m : methods) {
      const int mi = static_cast<int>(m);
      PowerCell pc;
      pc.scenario = cell.scenario->name;
      pc.method = m;
      pc.sigma = cell.sigma;
      Index rejections = 0;
      bool applicable = true;
      for (Index rep = 0; rep < reps; ++rep) {
        const RepOutcome& out =
            outcomes[static_cast<std::size_t>(cell.cell) * static_cast<std::size_t>(reps) +
                     static_cast<std::size_t>(rep)];
        applicable = applicable && out.applicable[mi];
        if (out.reject[mi]) ++rejections;
      }
      pc.applicable = applicable;
      pc.power = applicable
                     ? static_cast<double>(rejections) / static_cast<double>(reps)
                     : std::numeric_limits<double>::quiet_NaN();
      table.cells.push_back(std::move(pc));
    }
  }
  return table;
}

} // namespace fglm

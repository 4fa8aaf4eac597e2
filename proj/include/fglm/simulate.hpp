#ifndef FGLM_SIMULATE_HPP
#define FGLM_SIMULATE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fglm/factor.hpp"
#include "fglm/sample.hpp"
#include "fglm/types.hpp"

namespace fglm {

/// Synthetic mean curve on t in [0,1] controlled by three knobs:
///   peak  - shifts/sharpens an early peak:      3(5+2*peak) t (1-t)^(5+2*peak)
///   bump  - exponent of a late bump on (3/4,1): (max{0, 64(1-t)(t-3/4)})^bump
///   arch  - scales a symmetric arch:            t(1-t) arch / 100
/// The three summands are additive, so two knobs acting through different
/// summands never interact.
double model_function(double peak, double bump, double arch, double t);

/// K independent N(0, sigma^2) values.
Vector gen_iid_error(double sigma, Index k, std::mt19937_64& rng);

/// Cumulative sum of K i.i.d. Gaussian increments, each with standard
/// deviation sigma_at_one / sqrt(K); element m has variance m*sigma_at_one^2/K
/// and the final element has standard deviation sigma_at_one.
Vector gen_brownian_error(double sigma_at_one, Index k, std::mt19937_64& rng);

/// How one mean-curve knob behaves across the simulated design: a fixed value
/// per group, or a per-function uniform draw.  A drawn value is always
/// recorded (it can back a continuous covariate) but feeds the mean curve
/// only when `feeds_model` is set — otherwise the group value applies and the
/// recorded covariate has no true effect.
struct ParamSpec {
  std::vector<double> values;                    ///< one value per group
  std::optional<std::array<double, 2>> range;    ///< per-function U[lo, hi] draw
  bool feeds_model = true;
};

enum class ErrorKind { iid, brownian };

struct ErrorModel {
  ErrorKind kind = ErrorKind::iid;
  double sigma = 0.3;  ///< i.i.d.: pointwise sd; brownian: sd of the final element
};

/// Binds a model factor to the simulated structure: either a categorical
/// factor with a fixed level per group, or a continuous factor carrying the
/// recorded values of one mean-curve knob.
struct FactorBinding {
  std::string name;
  std::vector<std::string> levels_by_group;  ///< categorical binding when nonempty
  std::optional<int> param;                  ///< 0 = peak, 1 = bump, 2 = arch
};

/// Bookkeeping for power studies: whether the generated data really carry an
/// interest / nuisance effect.
struct TruthFlags {
  bool interest_effect = false;
  bool nuisance_effect = false;
};

struct Scenario {
  std::string name;
  Index group_count = 6;
  Index per_group = 10;
  Index grid_size = 100;
  ParamSpec peak, bump, arch;
  ErrorModel error;
  std::vector<FactorBinding> factors;
  std::vector<std::string> interest, nuisance;
  TruthFlags truth;

  Index n() const { return group_count * per_group; }
};

/// Structural validation (sizes, declared names, bump >= 1 so the late bump
/// stays well defined at t <= 3/4); throws ConfigError.
void validate_scenario(const Scenario& sc);

struct SimulatedData {
  FunctionalSample sample;
  std::vector<Factor> factors;
  ModelSpec model;
};

/// Draws one dataset: grid t_k = k/(K-1), group mean curves from the knobs,
/// additive error per function.  Fully determined by (scenario, seed).
SimulatedData simulate_dataset(const Scenario& sc, std::uint64_t seed);

// --- built-in scenario catalog -------------------------------------------
// Six tables of simulation scenarios: t1 = categorical interest (3 groups)
// with a categorical nuisance, t2 = continuous interest with varying
// nuisance, t3 = interaction interest above both main effects; t4-t6 repeat
// t1-t3 with Brownian errors.

std::vector<std::string> builtin_tables();
std::vector<Scenario> builtin_table(const std::string& table_id);
std::vector<double> table_sigmas(const std::string& table_id);
/// A single catalog entry, e.g. "t1m3".
Scenario builtin_scenario(const std::string& name);

/// Scenario from a JSON file mirroring the Scenario fields.
Scenario load_scenario_file(const std::string& path);

// --- power study ----------------------------------------------------------

enum class Method { getp, getdp, fmax };
std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct PowerCell {
  std::string scenario;
  Method method = Method::getp;
  double sigma = 0;
  double power = 0;        ///< NaN when the method does not apply
  bool applicable = true;
};

struct PowerTable {
  std::vector<PowerCell> cells;
  Index reps = 0;
  Index nperm = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

/// Monte-Carlo rejection rates: for every (scenario, sigma) pair, `reps`
/// datasets are drawn, each analysed once with `nperm` permutations shared by
/// all methods, and each method's p <= alpha decisions are averaged.
/// Replications run in parallel on independent RNG streams keyed by
/// (scenario name, sigma, rep), so the table is bit-identical for any thread
/// count and any partition of the scenario list.
PowerTable run_power_study(const std::vector<Scenario>& scenarios,
                           const std::vector<Method>& methods,
                           const std::vector<double>& sigmas, Index reps, Index nperm,
                           double alpha, std::uint64_t seed);

} // namespace fglm

#endif

#ifndef FGLM_CSV_HPP
#define FGLM_CSV_HPP

#include <string>
#include <vector>

#include "fglm/envelope.hpp"
#include "fglm/factor.hpp"
#include "fglm/sample.hpp"
#include "fglm/simulate.hpp"
#include "fglm/stats.hpp"

namespace fglm {

/// Shortest decimal representation that round-trips to the same double;
/// "inf"/"nan" never appear in valid outputs.
std::string format_double(double v);

/// RFC-4180 field quoting (quotes applied only when needed).
std::string csv_field(const std::string& raw);

/// Parses an entire RFC-4180 document: quoted fields, embedded separators and
/// line breaks, doubled quotes; accepts both CRLF and LF record endings.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// --- functional data --------------------------------------------------------
// Layout: header "id,<t1>,...,<tK>" with the grid values as column labels,
// then one row per function.

FunctionalSample load_functions(const std::string& path);
void save_functions(const FunctionalSample& sample, const std::string& path);

// --- factor tables -----------------------------------------------------------
// Layout: header "id,<factor1>,...". A column whose entries all parse as
// numbers becomes a continuous factor; a column with no numeric entries
// becomes categorical (levels in first-appearance order); anything in between
// raises MixedColumnError.

struct FactorTable {
  std::vector<std::string> ids;
  std::vector<Factor> factors;
};

FactorTable load_factors(const std::string& path);
void save_factors(const FactorTable& table, const std::string& path);

/// Reorders the factor rows into the sample's id order; the two id sets must
/// coincide exactly (IdMismatchError otherwise).
std::vector<Factor> align_factors(const FunctionalSample& sample, const FactorTable& table);

// --- analysis outputs ---------------------------------------------------------

/// "<p>" or "<1/I" display convention: a p-value at the resolution floor 1/I
/// only bounds the true value from above.
std::string p_value_display(double p, Index i_count);

/// One-row summary of a single test run.
struct TestOutcome {
  std::string statistic;  // coeff | pairwise | fmax
  double p_value = 1;
  Index i_count = 0;      // permutations incl. identity
  bool rejected = false;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  std::vector<std::string> exit_labels;
};

void write_results_csv(const TestOutcome& outcome, const std::string& path);

/// Long-format envelope: label_j, t, low, observed, upp, exit_flag where
/// exit_flag is -1 (below low), 0 (inside) or +1 (above upp).
void write_envelope_csv(const TestVectorMatrix& t, const EnvelopeResult& res,
                        const std::string& path);

void write_power_csv(const PowerTable& table, const std::string& path);

} // namespace fglm

#endif

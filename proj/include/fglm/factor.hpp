#ifndef FGLM_FACTOR_HPP
#define FGLM_FACTOR_HPP

#include <string>
#include <vector>

#include "fglm/types.hpp"

namespace fglm {

enum class FactorKind { continuous, categorical };

/// One per-function covariate: either a continuous value or a categorical
/// level for each of the n functions.  Interactions are not stored as data;
/// they are named "A:B" in the model and expanded at design time.
struct Factor {
  std::string name;
  FactorKind kind = FactorKind::continuous;
  std::vector<double> values;        ///< continuous: n values
  std::vector<std::string> levels;   ///< categorical: level labels, first-seen order
  IndexVector level_index;           ///< categorical: n indices into `levels`

  static Factor continuous(std::string name, std::vector<double> values);
  /// Builds the level set in order of first appearance.
  static Factor categorical(std::string name, const std::vector<std::string>& obs_levels);

  Index n() const {
    return kind == FactorKind::continuous ? static_cast<Index>(values.size())
                                          : static_cast<Index>(level_index.size());
  }
  Index level_count() const { return static_cast<Index>(levels.size()); }
};

/// Which factors form the tested part (interest) and the nuisance part of the
/// model.  Interaction terms are written "A:B"; every interaction must have
/// both parents listed in interest or nuisance.  The intercept always belongs
/// to the nuisance part.
struct ModelSpec {
  std::vector<std::string> interest;
  std::vector<std::string> nuisance;
  bool include_intercept = true;
};

} // namespace fglm

#endif

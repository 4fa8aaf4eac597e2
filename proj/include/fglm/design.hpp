#ifndef FGLM_DESIGN_HPP
#define FGLM_DESIGN_HPP

#include <string>
#include <vector>

#include "fglm/factor.hpp"
#include "fglm/types.hpp"

namespace fglm {

/// Interest/nuisance design matrices for one model, built once and shared by
/// every grid point and every permutation (the design does not depend on the
/// function argument).
///
/// Categorical terms are deviation-coded (sum-to-zero): a factor with J
/// levels contributes J-1 contrast columns to X, and the J per-level effects
/// are recovered as `expand * b` from the fitted contrast coefficients b.
/// By construction the recovered effects of each categorical term sum to
/// zero.  `carrier` is the n x J matrix satisfying carrier * expand * b ==
/// X * b for every b; it lets callers reconstruct fitted values directly
/// from recovered effects.
struct DesignPair {
  Matrix X;          ///< n x p_x contrast-coded interest columns
  Matrix Z;          ///< n x p_z nuisance columns (intercept first, if any)
  Matrix expand;     ///< J x p_x recovery map from contrast coefficients
  Matrix carrier;    ///< n x J effect carriers (indicators, slopes, cells)
  std::vector<std::string> j_labels;  ///< J labels for the recovered effects
  std::string coding_map;             ///< human-readable column description

  Index n() const { return X.rows(); }
  Index j_count() const { return expand.rows(); }
};

/// Assembles the design for `spec` from `factors`, validating that every
/// factor covers n observations.  Interaction terms are written "A:B" and
/// require both parents among the model's main effects.
///
/// Throws EmptyLevelError, ConfoundedDesignError, ShapeMismatchError,
/// NonFiniteInputError or ConfigError.
DesignPair build_design(const ModelSpec& spec, const std::vector<Factor>& factors, Index n);

} // namespace fglm

#endif

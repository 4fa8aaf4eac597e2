#ifndef FGLM_FIT_HPP
#define FGLM_FIT_HPP

#include "fglm/design.hpp"
#include "fglm/sample.hpp"
#include "fglm/types.hpp"

namespace fglm {

/// Pointwise least-squares fit of a functional response.  `beta` holds the
/// recovered interest-effect functions (one row per parameter, expanded from
/// the contrast coefficients), `gamma` the raw nuisance coefficients.
struct FitResult {
  Matrix beta;       ///< J x K recovered interest effects (0 x K for reduced fits)
  Matrix gamma;      ///< p_z x K nuisance coefficients
  Matrix residuals;  ///< n x K
  Vector sse;        ///< K pointwise residual sums of squares
  Index model_rank = 0;  ///< numerical rank of the fitted design
};

/// Caches the orthogonal factorizations of the full design [X Z] and of the
/// nuisance design Z so that the K grid points — and any number of permuted
/// responses — are solved against the same decomposition.  Rank-deficient
/// designs get the minimum-norm solution.
class GlmSolver {
 public:
  explicit GlmSolver(DesignPair design);

  /// Full-model fit of an n x K response matrix.
  FitResult fit_full(const Matrix& y) const;
  /// Nuisance-only fit (beta left empty).
  FitResult fit_reduced(const Matrix& y) const;

  Index full_rank() const { return full_rank_; }
  Index reduced_rank() const { return reduced_rank_; }
  const DesignPair& design() const { return design_; }

 private:
  void check_response(const Matrix& y) const;

  DesignPair design_;
  Matrix full_design_;   // [X Z]
  Matrix pinv_full_;     // p x n minimum-norm solve operator
  Matrix pinv_reduced_;  // p_z x n
  Index full_rank_ = 0;
  Index reduced_rank_ = 0;
};

/// One-shot wrappers around GlmSolver.
FitResult fit_pointwise(const FunctionalSample& sample, const DesignPair& design);
FitResult fit_reduced(const FunctionalSample& sample, const DesignPair& design);

} // namespace fglm

#endif

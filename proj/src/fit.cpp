#include "fglm/fit.hpp"

#include <Eigen/QR>

#include "fglm/errors.hpp"

namespace fglm {

namespace {
// Minimum-norm least-squares operator via a complete orthogonal
// decomposition; materialised as a dense matrix because it is applied to
// many right-hand sides (K grid columns x I permutations).
Matrix pseudo_inverse(const Matrix& m, Index& rank_out) {
  if (m.cols() == 0) {
    rank_out = 0;
    return Matrix::Zero(0, m.rows());
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(m);
  rank_out = cod.rank();
  return cod.pseudoInverse();
}
} // namespace

GlmSolver::GlmSolver(DesignPair design) : design_(std::move(design)) {
  if (!design_.X.allFinite() || !design_.Z.allFinite())
    throw NonFiniteInputError("design contains non-finite entries");
  if (design_.Z.rows() != design_.X.rows())
    throw ShapeMismatchError("interest and nuisance blocks disagree on n");
  if (design_.expand.cols() != design_.X.cols())
    throw ShapeMismatchError("effect recovery map does not match the interest block");

  full_design_.resize(design_.X.rows(), design_.X.cols() + design_.Z.cols());
  full_design_ << design_.X, design_.Z;
  pinv_full_ = pseudo_inverse(full_design_, full_rank_);
  pinv_reduced_ = pseudo_inverse(design_.Z, reduced_rank_);
}

void GlmSolver::check_response(const Matrix& y) const {
  if (y.rows() != design_.n())
    throw ShapeMismatchError("response has " + std::to_string(y.rows()) +
                             " rows, design expects " + std::to_string(design_.n()));
  if (!y.allFinite()) throw NonFiniteInputError("response contains non-finite entries");
}

FitResult GlmSolver::fit_full(const Matrix& y) const {
  check_response(y);
  FitResult r;
  const Matrix coef = pinv_full_ * y;  // p x K
  r.beta = design_.expand * coef.topRows(design_.X.cols());
  r.gamma = coef.bottomRows(design_.Z.cols());
  r.residuals = y - full_design_ * coef;
  r.sse = r.residuals.colwise().squaredNorm();
  r.model_rank = full_rank_;
  return r;
}

FitResult GlmSolver::fit_reduced(const Matrix& y) const {
  check_response(y);
  FitResult r;
  r.beta.resize(0, y.cols());
  if (design_.Z.cols() > 0) {
    r.gamma = pinv_reduced_ * y;
    r.residuals = y - design_.Z * r.gamma;
  } else {
    r.gamma.resize(0, y.cols());
    r.residuals = y;  // empty nuisance: the reduced model predicts zero
  }
  r.sse = r.residuals.colwise().squaredNorm();
  r.model_rank = reduced_rank_;
  return r;
}

FitResult fit_pointwise(const FunctionalSample& sample, const DesignPair& design) {
  return GlmSolver(design).fit_full(sample.values);
}

FitResult fit_reduced(const FunctionalSample& sample, const DesignPair& design) {
  return GlmSolver(design).fit_reduced(sample.values);
}

} // namespace fglm

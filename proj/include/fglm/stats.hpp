#ifndef FGLM_STATS_HPP
#define FGLM_STATS_HPP

#include <string>
#include <vector>

#include "fglm/permute.hpp"
#include "fglm/sample.hpp"
#include "fglm/types.hpp"

namespace fglm {

enum class VectorLayout { coefficients, pairwise_differences };

/// Long test vectors for the envelope machinery: row 0 is the observed data
/// vector, rows 1..I-1 come from permutations.  Curve layouts stack `panels`
/// effect curves of `k` consecutive grid values each (L = panels * k).
struct TestVectorMatrix {
  Matrix rows;  ///< I x L
  VectorLayout layout = VectorLayout::coefficients;
  Index panels = 0;
  Index k = 0;
  std::vector<std::string> panel_labels;  ///< `panels` labels
  Vector grid;                            ///< k grid values (for labels/plots)

  Index i_count() const { return rows.rows(); }
  Index l() const { return rows.cols(); }
  /// "<panel label>@t=<grid value>" for element e.
  std::string element_label(Index e) const;
};

/// Per-permutation GLM summaries, kept lean so that thousands of
/// permutations fit in memory: recovered effects plus full- and
/// reduced-model SSE (both measured on the same rebuilt response).
struct PermutationGlm {
  Matrix beta_flat;    ///< I x (J*K), row i = effects of permutation i, parameter-major
  Matrix sse_full;     ///< I x K
  Matrix sse_reduced;  ///< I x K
  Index j = 0, k = 0;
  Index df1 = 0, df2 = 0;  ///< nested-model F degrees of freedom
  std::vector<std::string> j_labels;
  Vector grid;

  Index i_count() const { return beta_flat.rows(); }
};

/// Runs the whole Freedman-Lane batch (parallel over permutations) and keeps
/// only what the graphical and F-max tests need.
PermutationGlm freedman_lane_glm(const FunctionalSample& sample, const DesignPair& design,
                                 const PermutationSet& perms);

/// Coefficient layout: all J effect curves concatenated parameter-major.
TestVectorMatrix test_vector_coeff(const PermutationGlm& batch);
TestVectorMatrix test_vector_coeff(const std::vector<FitResult>& fits,
                                   const std::vector<std::string>& j_labels,
                                   const Vector& grid);

/// Pairwise-difference layout: curves beta_a - beta_b for every pair a < b in
/// the order (1,2), (1,3), ..., (J-1,J).  Needs J >= 2 (NotApplicableError
/// otherwise, e.g. for a continuous interest factor).
TestVectorMatrix test_vector_pairwise(const PermutationGlm& batch);
TestVectorMatrix test_vector_pairwise(const std::vector<FitResult>& fits,
                                      const std::vector<std::string>& j_labels,
                                      const Vector& grid);

/// Pointwise nested-model F statistic.  Degenerate points follow 0/0 -> 0 and
/// positive/0 -> +infinity (which orders above every finite value).
Vector f_pointwise(const Vector& sse_full, const Vector& sse_reduced, Index df1, Index df2);

struct FMaxResult {
  double p_value = 1;
  Vector observed_f;       ///< K pointwise F values of the observed data
  Vector max_distribution; ///< I maxima; element 0 is the observed maximum
};

/// Permutation F-max test: p = #{i : max_i >= max_0} / I.
FMaxResult f_max_test(const PermutationGlm& batch);
FMaxResult f_max_test(const FunctionalSample& sample, const DesignPair& design,
                      const PermutationSet& perms);

} // namespace fglm

#endif

#ifndef FGLM_PERMUTE_HPP
#define FGLM_PERMUTE_HPP

#include <cstdint>
#include <vector>

#include "fglm/fit.hpp"
#include "fglm/types.hpp"

namespace fglm {

/// A set of row permutations of {0..n-1}.  The first entry is always the
/// identity, so position 0 of any derived statistic belongs to the observed
/// data.  Random sets are sampled with replacement; permutation j depends
/// only on (seed, j), never on execution order.
struct PermutationSet {
  std::vector<IndexVector> perms;
  std::uint64_t seed = 0;

  Index count() const { return static_cast<Index>(perms.size()); }
  Index n() const { return perms.empty() ? 0 : static_cast<Index>(perms.front().size()); }
};

/// Identity plus count-1 uniformly random permutations (count >= 1).
PermutationSet generate_permutations(Index n, Index count, std::uint64_t seed);

/// All n! permutations in lexicographic order (identity first).  Guarded to
/// n <= 8 to keep the enumeration in memory.
PermutationSet exhaustive_permutations(Index n);

/// Freedman-Lane step for one permutation: fit the nuisance-only model,
/// rebuild the response as (nuisance fit + row-permuted nuisance residuals)
/// and refit the full model to it.
FitResult freedman_lane(const Matrix& y, const DesignPair& design, const IndexVector& perm);
FitResult freedman_lane(const GlmSolver& solver, const Matrix& y, const IndexVector& perm);

/// Freedman-Lane refits for every permutation in the set (parallel over
/// permutations; the nuisance fit and the design factorizations are computed
/// once).  Entry 0 is the observed-data fit.
std::vector<FitResult> permuted_beta_batch(const Matrix& y, const DesignPair& design,
                                           const PermutationSet& perms);

} // namespace fglm

#endif

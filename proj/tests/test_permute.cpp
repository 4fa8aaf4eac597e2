#include <doctest.h>

#include <algorithm>
#include <random>

#include "fglm/design.hpp"
#include "fglm/errors.hpp"
#include "fglm/parallel.hpp"
#include "fglm/permute.hpp"

using namespace fglm;

namespace {

bool is_bijection(const IndexVector& p) {
  IndexVector sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<Index>(i)) return false;
  return true;
}

Matrix randn(Index rows, Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

DesignPair two_group_design(Index n) {
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back(i < n / 2 ? "a" : "b");
  ModelSpec spec;
  spec.interest = {"g"};
  return build_design(spec, {Factor::categorical("g", labels)}, n);
}

} // namespace

TEST_CASE("exhaustive permutations enumerate n! with identity first") {
  const PermutationSet set = exhaustive_permutations(3);
  CHECK(set.count() == 6);
  CHECK(set.perms[0] == IndexVector{0, 1, 2});
  for (const auto& p : set.perms) CHECK(is_bijection(p));
  // all distinct
  for (std::size_t a = 0; a < set.perms.size(); ++a)
    for (std::size_t b = a + 1; b < set.perms.size(); ++b) CHECK(set.perms[a] != set.perms[b]);

  CHECK_THROWS_AS(exhaustive_permutations(9), ConfigError);
}

TEST_CASE("random permutation sets are seeded bijections with identity first") {
  const PermutationSet set = generate_permutations(60, 40, 123);
  CHECK(set.count() == 40);
  CHECK(set.perms[0] == [] {
    IndexVector id(60);
    for (Index i = 0; i < 60; ++i) id[static_cast<std::size_t>(i)] = i;
    return id;
  }());
  for (const auto& p : set.perms) CHECK(is_bijection(p));

  const PermutationSet again = generate_permutations(60, 40, 123);
  CHECK(set.perms == again.perms);
  const PermutationSet other = generate_permutations(60, 40, 124);
  CHECK(set.perms != other.perms);
}

TEST_CASE("identity permutation reproduces the observed fit bitwise") {
  const DesignPair d = two_group_design(6);
  const Matrix y = randn(6, 8, 5);
  const GlmSolver solver(d);
  const FitResult direct = solver.fit_full(y);
  const FitResult via_fl = freedman_lane(solver, y, {0, 1, 2, 3, 4, 5});
  CHECK((direct.beta - via_fl.beta).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((direct.residuals - via_fl.residuals).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("intercept-only nuisance makes Freedman-Lane a raw permutation") {
  const DesignPair d = two_group_design(6);
  const Matrix y = randn(6, 10, 6);
  const IndexVector perm = {2, 0, 5, 3, 1, 4};

  const FitResult fl = freedman_lane(y, d, perm);

  Matrix y_perm(6, 10);
  for (Index i = 0; i < 6; ++i) y_perm.row(i) = y.row(perm[static_cast<std::size_t>(i)]);
  const FitResult raw = GlmSolver(d).fit_full(y_perm);

  CHECK((fl.beta - raw.beta).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("zero reduced-model residuals collapse all permutations") {
  const DesignPair d = two_group_design(4);
  Matrix y(4, 3);
  for (Index i = 0; i < 4; ++i) y.row(i) << 1.0, -2.0, 0.5;  // pure intercept signal
  const PermutationSet set = exhaustive_permutations(4);
  const auto fits = permuted_beta_batch(y, d, set);
  for (const auto& fit : fits)
    CHECK((fit.beta - fits[0].beta).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("batch equals mapping freedman_lane over each permutation") {
  const DesignPair d = two_group_design(4);
  const Matrix y = randn(4, 6, 8);
  const PermutationSet set = exhaustive_permutations(4);
  const auto batch = permuted_beta_batch(y, d, set);
  REQUIRE(batch.size() == 24);
  for (std::size_t i = 0; i < set.perms.size(); ++i) {
    const FitResult one = freedman_lane(y, d, set.perms[i]);
    CHECK((batch[i].beta - one.beta).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("batch output is identical for any thread count") {
  const DesignPair d = two_group_design(8);
  const Matrix y = randn(8, 12, 9);
  const PermutationSet set = generate_permutations(8, 64, 77);

  set_thread_limit(1);
  const auto seq = permuted_beta_batch(y, d, set);
  set_thread_limit(4);
  const auto par = permuted_beta_batch(y, d, set);
  set_thread_limit(0);

  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK((seq[i].beta - par[i].beta).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((seq[i].sse - par[i].sse).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("permutation validation") {
  CHECK_THROWS_AS(generate_permutations(0, 5, 1), ConfigError);
  CHECK_THROWS_AS(generate_permutations(5, 0, 1), ConfigError);
  const DesignPair d = two_group_design(4);
  CHECK_THROWS_AS(freedman_lane(randn(4, 2, 1), d, {0, 1, 2}), ShapeMismatchError);
}

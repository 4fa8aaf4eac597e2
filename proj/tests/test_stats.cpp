#include <doctest.h>

#include <random>

#include "fglm/design.hpp"
#include "fglm/errors.hpp"
#include "fglm/stats.hpp"
#include "oracle.hpp"

using namespace fglm;

namespace {

FitResult fit_with_beta(Matrix beta) {
  FitResult f;
  f.beta = std::move(beta);
  return f;
}

std::vector<FitResult> random_fits(Index count, Index j, Index k, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<FitResult> fits;
  for (Index i = 0; i < count; ++i) {
    Matrix b(j, k);
    for (Index a = 0; a < j; ++a)
      for (Index e = 0; e < k; ++e) b(a, e) = normal(rng);
    fits.push_back(fit_with_beta(std::move(b)));
  }
  return fits;
}

FunctionalSample two_group_sample(Index n, Index k, unsigned seed, double shift = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix y(n, k);
  for (Index i = 0; i < n; ++i)
    for (Index e = 0; e < k; ++e) y(i, e) = normal(rng) + (i < n / 2 ? shift : 0.0);
  return make_sample(Vector::LinSpaced(k, 0, 1), y);
}

DesignPair two_group_design(Index n) {
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back(i < n / 2 ? "a" : "b");
  ModelSpec spec;
  spec.interest = {"g"};
  return build_design(spec, {Factor::categorical("g", labels)}, n);
}

} // namespace

TEST_CASE("coefficient test vector flattens parameter-major") {
  Matrix beta(3, 2);
  beta << 1, 2, 3, 4, 5, 6;
  const Vector grid = Vector::LinSpaced(2, 0, 1);
  const auto t = test_vector_coeff({fit_with_beta(beta), fit_with_beta(beta)},
                                   {"g=a", "g=b", "g=c"}, grid);
  CHECK(t.i_count() == 2);
  CHECK(t.l() == 6);
  CHECK(t.panels == 3);
  Vector expect(6);
  expect << 1, 2, 3, 4, 5, 6;
  CHECK((t.rows.row(0).transpose() - expect).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(t.rows.row(1) == t.rows.row(0));
  CHECK(t.element_label(0) == "g=a@t=0");
  CHECK(t.element_label(3) == "g=b@t=1");
}

TEST_CASE("pairwise vector takes differences in (1,2),(1,3),(2,3) order") {
  Matrix beta(3, 1);
  beta << 2, 0, -2;
  const auto t =
      test_vector_pairwise({fit_with_beta(beta)}, {"g=a", "g=b", "g=c"}, Vector::Zero(1));
  CHECK(t.l() == 3);
  CHECK(t.rows(0, 0) == 2.0);   // a - b
  CHECK(t.rows(0, 1) == 4.0);   // a - c
  CHECK(t.rows(0, 2) == 2.0);   // b - c
  CHECK(t.panel_labels == std::vector<std::string>{"g=a - g=b", "g=a - g=c", "g=b - g=c"});
}

TEST_CASE("pairwise vector needs at least two groups") {
  Matrix beta(1, 4);
  beta.setOnes();
  CHECK_THROWS_AS(test_vector_pairwise({fit_with_beta(beta)}, {"slope"}, Vector::Zero(4)),
                  NotApplicableError);
}

TEST_CASE("for two groups the pairwise vector doubles the first effect curve") {
  const auto fits = random_fits(5, 2, 7, 31);
  // enforce the sum-to-zero structure beta_2 = -beta_1
  std::vector<FitResult> constrained;
  for (const auto& f : fits) {
    Matrix b = f.beta;
    b.row(1) = -b.row(0);
    constrained.push_back(fit_with_beta(std::move(b)));
  }
  const Vector grid = Vector::LinSpaced(7, 0, 1);
  const auto coeff = test_vector_coeff(constrained, {"g=a", "g=b"}, grid);
  const auto pair = test_vector_pairwise(constrained, {"g=a", "g=b"}, grid);
  CHECK(pair.l() == 7);
  CHECK((pair.rows - 2.0 * coeff.rows.leftCols(7)).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("pairwise differences satisfy the cocycle identity") {
  const auto fits = random_fits(6, 4, 5, 13);
  const auto t = test_vector_pairwise(fits, {"1", "2", "3", "4"}, Vector::LinSpaced(5, 0, 1));
  // pair panels: (1,2)=0 (1,3)=1 (1,4)=2 (2,3)=3 (2,4)=4 (3,4)=5
  const Index k = 5;
  for (Index i = 0; i < t.i_count(); ++i)
    for (Index e = 0; e < k; ++e) {
      const double d12 = t.rows(i, 0 * k + e), d13 = t.rows(i, 1 * k + e);
      const double d14 = t.rows(i, 2 * k + e), d23 = t.rows(i, 3 * k + e);
      const double d24 = t.rows(i, 4 * k + e), d34 = t.rows(i, 5 * k + e);
      CHECK(std::abs(d13 - (d12 + d23)) <= 1e-10);
      CHECK(std::abs(d14 - (d12 + d24)) <= 1e-10);
      CHECK(std::abs(d24 - (d23 + d34)) <= 1e-10);
    }
}

TEST_CASE("pointwise F matches the nested-model formula") {
  Vector full(1), red(1);
  full << 4;
  red << 10;
  const Vector f = f_pointwise(full, red, 2, 3);
  CHECK(f[0] == doctest::Approx(2.25).epsilon(1e-12));

  SUBCASE("no explained variance gives zero") {
    const Vector z = f_pointwise(full, full, 2, 3);
    CHECK(z[0] == 0.0);
  }
  SUBCASE("perfect full fit gives the infinity sentinel") {
    Vector zero(1);
    zero << 0;
    const Vector inf = f_pointwise(zero, red, 2, 3);
    CHECK(std::isinf(inf[0]));
    const Vector both = f_pointwise(zero, zero, 2, 3);
    CHECK(both[0] == 0.0);
  }
  SUBCASE("invalid degrees of freedom") {
    CHECK_THROWS_AS(f_pointwise(full, red, 0, 3), NotApplicableError);
    CHECK_THROWS_AS(f_pointwise(full, red, 1, 0), NotApplicableError);
  }
}

TEST_CASE("f-max on identical constant functions is a total tie") {
  Matrix y(4, 3);
  for (Index i = 0; i < 4; ++i) y.row(i) << 2.0, 2.0, 2.0;
  const auto sample = make_sample(Vector::LinSpaced(3, 0, 1), y);
  const auto res = f_max_test(sample, two_group_design(4), exhaustive_permutations(4));
  CHECK(res.p_value == 1.0);
}

TEST_CASE("observed pointwise F agrees with a from-scratch two-group F") {
  const auto sample = two_group_sample(10, 6, 17, 1.0);
  const auto res =
      f_max_test(sample, two_group_design(10), generate_permutations(10, 30, 3));
  const Vector naive = oracle::two_group_f(sample.values, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  CHECK((res.observed_f - naive).lpNorm<Eigen::Infinity>() <= 1e-8);

  // p re-derived from the returned maxima
  double count = 0;
  for (Index i = 0; i < res.max_distribution.size(); ++i)
    if (res.max_distribution[i] >= res.max_distribution[0]) count += 1;
  CHECK(res.p_value == count / static_cast<double>(res.max_distribution.size()));
  CHECK(res.max_distribution[0] == res.observed_f.maxCoeff());
}

TEST_CASE("f-max p-value is invariant under increasing affine maps") {
  const auto sample = two_group_sample(8, 5, 23, 0.7);
  const auto perms = generate_permutations(8, 40, 9);
  const DesignPair d = two_group_design(8);
  const auto base = f_max_test(sample, d, perms);

  FunctionalSample scaled = sample;
  scaled.values = 3.0 * sample.values.array() - 7.0;
  const auto mapped = f_max_test(scaled, d, perms);
  CHECK(base.p_value == mapped.p_value);
}

TEST_CASE("adding a constant to every function leaves the test vectors unchanged") {
  const auto sample = two_group_sample(8, 5, 29, 0.5);
  const auto perms = generate_permutations(8, 25, 4);
  const DesignPair d = two_group_design(8);
  const auto base = freedman_lane_glm(sample, d, perms);

  FunctionalSample shifted = sample;
  shifted.values = sample.values.array() + 5.0;
  const auto moved = freedman_lane_glm(shifted, d, perms);

  CHECK((base.beta_flat - moved.beta_flat).lpNorm<Eigen::Infinity>() <= 1e-8);
  const auto t1 = test_vector_pairwise(base);
  const auto t2 = test_vector_pairwise(moved);
  CHECK((t1.rows - t2.rows).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("freedman_lane_glm exposes the nested degrees of freedom") {
  const auto sample = two_group_sample(10, 4, 41, 0.0);
  const auto batch = freedman_lane_glm(sample, two_group_design(10), generate_permutations(10, 20, 1));
  CHECK(batch.df1 == 1);  // rank([X Z]) - rank(Z) = 2 - 1
  CHECK(batch.df2 == 8);  // n - rank([X Z])
  CHECK(batch.j == 2);
  CHECK(batch.k == 4);
}

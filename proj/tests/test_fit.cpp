#include <doctest.h>

#include <random>

#include "fglm/design.hpp"
#include "fglm/errors.hpp"
#include "fglm/fit.hpp"

using namespace fglm;

namespace {

// Hand-built design: raw covariate (0,1,2) as interest, intercept nuisance.
DesignPair line_design() {
  DesignPair d;
  d.X.resize(3, 1);
  d.X << 0, 1, 2;
  d.Z = Matrix::Ones(3, 1);
  d.expand = Matrix::Ones(1, 1);
  d.carrier = d.X;
  d.j_labels = {"x"};
  return d;
}

Matrix randn(Index rows, Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

std::vector<Factor> group_factors() {
  return {Factor::categorical("group", {"A", "A", "B", "B", "C", "C"})};
}

} // namespace

TEST_CASE("three-point line fit matches hand least squares") {
  const GlmSolver solver(line_design());
  Matrix y(3, 1);
  y << 1, 2, 4;

  const FitResult full = solver.fit_full(y);
  CHECK(full.beta(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(full.gamma(0, 0) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(full.residuals(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(full.residuals(1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
  CHECK(full.residuals(2, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(full.sse[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(full.model_rank == 2);

  const FitResult reduced = solver.fit_reduced(y);
  CHECK(reduced.beta.rows() == 0);
  CHECK(reduced.gamma(0, 0) == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
  CHECK(reduced.residuals(0, 0) == doctest::Approx(-4.0 / 3.0).epsilon(1e-10));
  CHECK(reduced.residuals(1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
  CHECK(reduced.residuals(2, 0) == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("duplicated interest column takes the minimum-norm split") {
  DesignPair d = line_design();
  Matrix x2(3, 2);
  x2 << d.X, d.X;
  d.X = x2;
  d.expand = Matrix::Identity(2, 2);
  d.carrier = d.X;
  d.j_labels = {"x", "x_copy"};

  Matrix y(3, 1);
  y << 1, 2, 4;
  const FitResult fit = GlmSolver(d).fit_full(y);
  CHECK(fit.model_rank == 2);  // 3 columns, rank 2
  CHECK(fit.beta(0, 0) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(fit.beta(1, 0) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(fit.sse[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("exact zero-noise generation is recovered") {
  ModelSpec spec;
  spec.interest = {"group"};
  const DesignPair d = build_design(spec, group_factors(), 6);

  const Index k = 4;
  Matrix effects(3, k);
  effects << 1, 2, 0, -1,
             0.5, -1, 1, 0.5,
             -1.5, -1, -1, 0.5;  // columns sum to zero
  const Matrix gamma = randn(1, k, 3);
  const Matrix y = d.carrier * effects + d.Z * gamma;

  const FitResult fit = fit_pointwise(make_sample(Vector::LinSpaced(k, 0, 1), y), d);
  CHECK((fit.beta - effects).lpNorm<Eigen::Infinity>() <= 1e-8);
  CHECK(fit.residuals.lpNorm<Eigen::Infinity>() <= 1e-8);
  CHECK(fit.beta.colwise().sum().lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("fit invariants on noisy data") {
  ModelSpec spec;
  spec.interest = {"group"};
  const DesignPair d = build_design(spec, group_factors(), 6);
  const Matrix y = randn(6, 5, 7);
  const GlmSolver solver(d);
  const FitResult full = solver.fit_full(y);
  const FitResult reduced = solver.fit_reduced(y);

  SUBCASE("design reproduction") {
    Matrix carrier_z(6, d.carrier.cols() + d.Z.cols());
    carrier_z << d.carrier, d.Z;
    Matrix coef(d.carrier.cols() + d.Z.cols(), y.cols());
    coef << full.beta, full.gamma;
    CHECK((carrier_z * coef + full.residuals - y).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
  SUBCASE("residuals orthogonal to design columns") {
    Matrix design(6, d.X.cols() + d.Z.cols());
    design << d.X, d.Z;
    CHECK((design.transpose() * full.residuals).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
  SUBCASE("full SSE never exceeds reduced SSE") {
    for (Index e = 0; e < y.cols(); ++e) CHECK(full.sse[e] <= reduced.sse[e] + 1e-12);
  }
  SUBCASE("recovered effects sum to zero") {
    CHECK(full.beta.colwise().sum().lpNorm<Eigen::Infinity>() <= 1e-10);
  }
  SUBCASE("nuisance absorption") {
    const Matrix shifted = y + d.Z * randn(d.Z.cols(), y.cols(), 9);
    const FitResult fit2 = solver.fit_full(shifted);
    CHECK((fit2.beta - full.beta).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
  SUBCASE("row relabeling invariance") {
    const IndexVector perm = {3, 0, 5, 1, 4, 2};
    DesignPair dp = d;
    Matrix yp(6, y.cols());
    for (Index i = 0; i < 6; ++i) {
      dp.X.row(i) = d.X.row(perm[static_cast<std::size_t>(i)]);
      dp.Z.row(i) = d.Z.row(perm[static_cast<std::size_t>(i)]);
      dp.carrier.row(i) = d.carrier.row(perm[static_cast<std::size_t>(i)]);
      yp.row(i) = y.row(perm[static_cast<std::size_t>(i)]);
    }
    const FitResult fitp = GlmSolver(dp).fit_full(yp);
    CHECK((fitp.beta - full.beta).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

TEST_CASE("reduced fit with intercept only centers the columns") {
  DesignPair d = line_design();
  const Matrix y = randn(3, 4, 21);
  const FitResult reduced = GlmSolver(d).fit_reduced(y);
  for (Index e = 0; e < 4; ++e) {
    CHECK(reduced.gamma(0, e) == doctest::Approx(y.col(e).mean()).epsilon(1e-12));
    CHECK(std::abs(reduced.residuals.col(e).sum()) <= 1e-10);
  }
}

TEST_CASE("response validation") {
  const GlmSolver solver(line_design());
  SUBCASE("row mismatch") {
    CHECK_THROWS_AS(solver.fit_full(Matrix::Zero(4, 2)), ShapeMismatchError);
  }
  SUBCASE("non-finite response") {
    Matrix y = Matrix::Zero(3, 2);
    y(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(solver.fit_full(y), NonFiniteInputError);
  }
}

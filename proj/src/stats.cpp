#include "fglm/stats.hpp"

#include <cmath>
#include <limits>

#include "fglm/errors.hpp"
#include "fglm/parallel.hpp"

namespace fglm {

namespace {
// Shared numeric formatting lives in csv.cpp; labels here only need a short
// grid value representation.
std::string grid_repr(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

void require_curve_layout(const TestVectorMatrix& t) {
  if (t.panels * t.k != t.l())
    throw ShapeMismatchError("test vector length does not factor into panels x grid");
}
} // namespace

std::string TestVectorMatrix::element_label(Index e) const {
  require_curve_layout(*this);
  const Index p = e / k, g = e % k;
  return panel_labels[static_cast<std::size_t>(p)] + "@t=" + grid_repr(grid[g]);
}

PermutationGlm freedman_lane_glm(const FunctionalSample& sample, const DesignPair& design,
                                 const PermutationSet& perms) {
  if (perms.count() < 1) throw ConfigError("empty permutation set");
  if (perms.n() != sample.n())
    throw ShapeMismatchError("permutation length does not match the sample size");

  const GlmSolver solver(design);
  const FitResult reduced = solver.fit_reduced(sample.values);
  const Matrix fitted = sample.values - reduced.residuals;

  PermutationGlm batch;
  batch.j = design.j_count();
  batch.k = sample.k();
  batch.df1 = solver.full_rank() - solver.reduced_rank();
  batch.df2 = sample.n() - solver.full_rank();
  batch.j_labels = design.j_labels;
  batch.grid = sample.grid;

  const Index i_count = perms.count();
  batch.beta_flat.resize(i_count, batch.j * batch.k);
  batch.sse_full.resize(i_count, batch.k);
  batch.sse_reduced.resize(i_count, batch.k);

  parallel_for(0, i_count, [&](Index i) {
    const auto& perm = perms.perms[static_cast<std::size_t>(i)];
    bool identity = true;
    for (Index r = 0; r < sample.n() && identity; ++r)
      identity = perm[static_cast<std::size_t>(r)] == r;
    Matrix ystar;
    if (identity) {
      // The identity rebuild equals the data exactly in exact arithmetic; use
      // the data itself so row 0 is bitwise the observed fit.
      ystar = sample.values;
    } else {
      ystar.resize(sample.n(), batch.k);
      for (Index r = 0; r < sample.n(); ++r)
        ystar.row(r) = fitted.row(r) + reduced.residuals.row(perm[static_cast<std::size_t>(r)]);
    }

    const FitResult full = solver.fit_full(ystar);
    // Reduced-model SSE of the same rebuilt response, for the nested F.
    const FitResult red = solver.fit_reduced(ystar);

    for (Index j = 0; j < batch.j; ++j)
      batch.beta_flat.block(i, j * batch.k, 1, batch.k) = full.beta.row(j);
    batch.sse_full.row(i) = full.sse.transpose();
    batch.sse_reduced.row(i) = red.sse.transpose();
  });
  return batch;
}

namespace {
TestVectorMatrix coeff_layout(const Matrix& rows, Index j, Index k,
                              const std::vector<std::string>& j_labels, const Vector& grid) {
  TestVectorMatrix t;
  t.rows = rows;
  t.layout = VectorLayout::coefficients;
  t.panels = j;
  t.k = k;
  t.panel_labels = j_labels;
  t.grid = grid;
  return t;
}
} // namespace

TestVectorMatrix test_vector_coeff(const PermutationGlm& batch) {
  return coeff_layout(batch.beta_flat, batch.j, batch.k, batch.j_labels, batch.grid);
}

TestVectorMatrix test_vector_coeff(const std::vector<FitResult>& fits,
                                   const std::vector<std::string>& j_labels,
                                   const Vector& grid) {
  if (fits.empty()) throw ConfigError("no fits supplied");
  const Index j = fits.front().beta.rows(), k = fits.front().beta.cols();
  Matrix rows(static_cast<Index>(fits.size()), j * k);
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (fits[i].beta.rows() != j || fits[i].beta.cols() != k)
      throw ShapeMismatchError("fit " + std::to_string(i) + " has mismatched effect shape");
    for (Index jj = 0; jj < j; ++jj)
      rows.block(static_cast<Index>(i), jj * k, 1, k) = fits[i].beta.row(jj);
  }
  return coeff_layout(rows, j, k, j_labels, grid);
}

namespace {
TestVectorMatrix pairwise_from_coeff(const Matrix& beta_flat, Index j, Index k,
                                     const std::vector<std::string>& j_labels,
                                     const Vector& grid) {
  if (j < 2)
    throw NotApplicableError(
        "pairwise differences need a categorical interest factor (J >= 2)");
  TestVectorMatrix t;
  t.layout = VectorLayout::pairwise_differences;
  t.panels = j * (j - 1) / 2;
  t.k = k;
  t.grid = grid;
  t.rows.resize(beta_flat.rows(), t.panels * k);
  Index p = 0;
  for (Index a = 0; a < j; ++a) {
    for (Index b = a + 1; b < j; ++b, ++p) {
      t.rows.middleCols(p * k, k) =
          beta_flat.middleCols(a * k, k) - beta_flat.middleCols(b * k, k);
      t.panel_labels.push_back(j_labels[static_cast<std::size_t>(a)] + " - " +
                               j_labels[static_cast<std::size_t>(b)]);
    }
  }
  return t;
}
} // namespace

TestVectorMatrix test_vector_pairwise(const PermutationGlm& batch) {
  return pairwise_from_coeff(batch.beta_flat, batch.j, batch.k, batch.j_labels, batch.grid);
}

TestVectorMatrix test_vector_pairwise(const std::vector<FitResult>& fits,
                                      const std::vector<std::string>& j_labels,
                                      const Vector& grid) {
  const TestVectorMatrix coeff = test_vector_coeff(fits, j_labels, grid);
  return pairwise_from_coeff(coeff.rows, coeff.panels, coeff.k, j_labels, grid);
}

Vector f_pointwise(const Vector& sse_full, const Vector& sse_reduced, Index df1, Index df2) {
  if (sse_full.size() != sse_reduced.size())
    throw ShapeMismatchError("SSE vectors differ in length");
  if (df1 < 1 || df2 < 1)
    throw NotApplicableError("nested F needs df1 >= 1 and df2 >= 1 (got df1 = " +
                             std::to_string(df1) + ", df2 = " + std::to_string(df2) + ")");
  const Index k = sse_full.size();
  Vector f(k);
  for (Index e = 0; e < k; ++e) {
    // Nesting guarantees sse_reduced >= sse_full up to rounding; clamp the dust.
    double num = (sse_reduced[e] - sse_full[e]) / static_cast<double>(df1);
    if (num < 0) num = 0;
    const double den = sse_full[e] / static_cast<double>(df2);
    if (den > 0)
      f[e] = num / den;
    else
      f[e] = num > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return f;
}

FMaxResult f_max_test(const PermutationGlm& batch) {
  const Index i_count = batch.i_count();
  FMaxResult r;
  r.observed_f = f_pointwise(batch.sse_full.row(0).transpose(),
                             batch.sse_reduced.row(0).transpose(), batch.df1, batch.df2);
  r.max_distribution.resize(i_count);
  for (Index i = 0; i < i_count; ++i)
    r.max_distribution[i] = f_pointwise(batch.sse_full.row(i).transpose(),
                                        batch.sse_reduced.row(i).transpose(), batch.df1,
                                        batch.df2)
                                .maxCoeff();
  // Ties count as at least as extreme; the observed maximum counts itself,
  // so p >= 1/I.
  Index ge = 0;
  for (Index i = 0; i < i_count; ++i)
    if (r.max_distribution[i] >= r.max_distribution[0]) ++ge;
  r.p_value = static_cast<double>(ge) / static_cast<double>(i_count);
  return r;
}

FMaxResult f_max_test(const FunctionalSample& sample, const DesignPair& design,
                      const PermutationSet& perms) {
  return f_max_test(freedman_lane_glm(sample, design, perms));
}

} // namespace fglm

#include "fglm/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fglm/errors.hpp"

namespace fglm {

RankMatrix pointwise_ranks(const Matrix& t_rows) {
  const Index i_count = t_rows.rows(), l = t_rows.cols();
  if (i_count < 1 || l < 1) throw ShapeMismatchError("rank matrix needs at least one vector");

  RankMatrix rm;
  rm.s.resize(i_count, l);
  rm.r.resize(i_count, l);

  IndexVector idx(static_cast<std::size_t>(i_count));
  for (Index e = 0; e < l; ++e) {
    std::iota(idx.begin(), idx.end(), Index{0});
    std::sort(idx.begin(), idx.end(),
              [&](Index a, Index b) { return t_rows(a, e) < t_rows(b, e); });
    // Walk tie groups; every member gets the mean of the 1-based positions
    // the group occupies (mid-ranks).
    Index pos = 0;
    while (pos < i_count) {
      Index end = pos + 1;
      while (end < i_count &&
             t_rows(idx[static_cast<std::size_t>(end)], e) ==
                 t_rows(idx[static_cast<std::size_t>(pos)], e))
        ++end;
      const double mid = 0.5 * static_cast<double>(pos + 1 + end);  // mean of pos+1..end
      for (Index q = pos; q < end; ++q) rm.s(idx[static_cast<std::size_t>(q)], e) = mid;
      pos = end;
    }
  }
  rm.r = rm.s.array().min((static_cast<double>(i_count) + 1.0) - rm.s.array()).matrix();
  return rm;
}

namespace {
// Lexicographic comparison of two rows of a matrix: -1, 0 or +1.
int lex_compare(const Matrix& m, Index a, Index b) {
  for (Index e = 0; e < m.cols(); ++e) {
    if (m(a, e) < m(b, e)) return -1;
    if (m(a, e) > m(b, e)) return 1;
  }
  return 0;
}
} // namespace

ErlOrdering erl_order(const Matrix& r) {
  const Index i_count = r.rows(), l = r.cols();
  ErlOrdering ord;
  ord.sorted_ranks.resize(i_count, l);
  for (Index i = 0; i < i_count; ++i) {
    Vector row = r.row(i).transpose();
    std::sort(row.data(), row.data() + l);
    ord.sorted_ranks.row(i) = row.transpose();
  }

  ord.order.resize(static_cast<std::size_t>(i_count));
  std::iota(ord.order.begin(), ord.order.end(), Index{0});
  std::sort(ord.order.begin(), ord.order.end(), [&](Index a, Index b) {
    const int c = lex_compare(ord.sorted_ranks, a, b);
    return c != 0 ? c < 0 : a < b;
  });

  // Min-rank measure: position of the first member of each tie group.
  ord.measure.assign(static_cast<std::size_t>(i_count), 0);
  Index group_start = 0;
  for (Index pos = 0; pos < i_count; ++pos) {
    if (pos > 0 && lex_compare(ord.sorted_ranks, ord.order[static_cast<std::size_t>(pos)],
                               ord.order[static_cast<std::size_t>(pos - 1)]) != 0)
      group_start = pos;
    ord.measure[static_cast<std::size_t>(ord.order[static_cast<std::size_t>(pos)])] =
        group_start + 1;
  }
  return ord;
}

double erl_p_value(const ErlOrdering& ordering) {
  const Index i_count = static_cast<Index>(ordering.measure.size());
  // #{i : measure_i > measure_0} counts exactly the vectors the observed one
  // is strictly more extreme than; ties contribute nothing.
  Index dominated = 0;
  for (Index i = 0; i < i_count; ++i)
    if (ordering.measure[static_cast<std::size_t>(i)] > ordering.measure[0]) ++dominated;
  return 1.0 - static_cast<double>(dominated) / static_cast<double>(i_count);
}

std::pair<Vector, Vector> build_envelope(const Matrix& t_rows, const ErlOrdering& ordering,
                                         double alpha) {
  const Index i_count = t_rows.rows();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const Index n_drop = static_cast<Index>(
      std::floor(alpha * static_cast<double>(i_count)));
  if (n_drop < 1)
    throw AlphaTooSmallError("floor(I*alpha) = 0: " + std::to_string(i_count) +
                             " vectors cannot resolve alpha = " + std::to_string(alpha));

  // ordering.order already breaks exact ERL ties by vector index, so the
  // drop set is deterministic.
  std::vector<bool> dropped(static_cast<std::size_t>(i_count), false);
  for (Index d = 0; d < n_drop; ++d)
    dropped[static_cast<std::size_t>(ordering.order[static_cast<std::size_t>(d)])] = true;

  const Index l = t_rows.cols();
  Vector low(l), upp(l);
  bool first = true;
  for (Index i = 0; i < i_count; ++i) {
    if (dropped[static_cast<std::size_t>(i)]) continue;
    if (first) {
      low = t_rows.row(i).transpose();
      upp = low;
      first = false;
    } else {
      low = low.cwiseMin(t_rows.row(i).transpose());
      upp = upp.cwiseMax(t_rows.row(i).transpose());
    }
  }
  return {low, upp};
}

EnvelopeResult global_envelope_test(const Matrix& t_rows, double alpha) {
  const RankMatrix rm = pointwise_ranks(t_rows);
  const ErlOrdering ord = erl_order(rm.r);

  EnvelopeResult res;
  res.alpha = alpha;
  res.i_count = t_rows.rows();
  res.p_value = erl_p_value(ord);
  std::tie(res.low, res.upp) = build_envelope(t_rows, ord, alpha);

  for (Index e = 0; e < t_rows.cols(); ++e)
    if (t_rows(0, e) < res.low[e] || t_rows(0, e) > res.upp[e]) res.exits.push_back(e);
  res.rejected = !res.exits.empty();
  return res;
}

EnvelopeResult global_envelope_test(const TestVectorMatrix& t, double alpha) {
  EnvelopeResult res = global_envelope_test(t.rows, alpha);
  res.exit_labels.reserve(res.exits.size());
  for (Index e : res.exits) res.exit_labels.push_back(t.element_label(e));
  return res;
}

} // namespace fglm

#ifndef FGLM_ENVELOPE_HPP
#define FGLM_ENVELOPE_HPP

#include <string>
#include <utility>
#include <vector>

#include "fglm/stats.hpp"
#include "fglm/types.hpp"

namespace fglm {

/// Pointwise ranks of I test vectors of length L.  `s` holds one-sided
/// mid-ranks (ties get the average of the positions they occupy, so columns
/// may be fractional but always sum to I(I+1)/2); `r` folds them two-sided:
/// r = min(s, I+1-s), small = extreme on either side.
struct RankMatrix {
  Matrix s;  ///< I x L one-sided mid-ranks
  Matrix r;  ///< I x L two-sided folded ranks
};

RankMatrix pointwise_ranks(const Matrix& t_rows);

/// Extreme-rank-length ordering of the I vectors.  Each vector is summarised
/// by its two-sided ranks sorted ascending; vectors compare lexicographically
/// on that sequence (smaller = more extreme).
struct ErlOrdering {
  Matrix sorted_ranks;  ///< I x L, each row nondecreasing
  IndexVector order;    ///< vector indices, most extreme first; ties broken by index
  IndexVector measure;  ///< 1..I per vector; exact ties share the smallest rank
};

ErlOrdering erl_order(const Matrix& r);

/// p = 1 - #{i : vector 0 strictly more extreme than vector i} / I.
/// Ties count as "not more extreme", so p is conservative and always >= 1/I.
double erl_p_value(const ErlOrdering& ordering);

/// Envelope after removing the floor(I*alpha) most extreme vectors (ties at
/// the cutoff resolved by vector index, lowest first): columnwise min and max
/// of the survivors.  Throws AlphaTooSmallError when floor(I*alpha) < 1.
std::pair<Vector, Vector> build_envelope(const Matrix& t_rows, const ErlOrdering& ordering,
                                         double alpha);

struct EnvelopeResult {
  double p_value = 1;
  Vector low, upp;    ///< global envelope, length L
  bool rejected = false;
  IndexVector exits;  ///< elements where the observed vector leaves the envelope
  std::vector<std::string> exit_labels;
  double alpha = 0.05;
  Index i_count = 0;
};

/// Complete graphical test: ranks, ERL ordering, p-value, envelope and the
/// exit set of the observed vector (row 0).  An element is an exit when the
/// observed value lies strictly outside [low, upp]; the observed vector exits
/// somewhere if and only if it is among the floor(I*alpha) removed vectors
/// (up to exact ties in vector values).
EnvelopeResult global_envelope_test(const TestVectorMatrix& t, double alpha);
EnvelopeResult global_envelope_test(const Matrix& t_rows, double alpha);

} // namespace fglm

#endif

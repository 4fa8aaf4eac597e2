#ifndef FGLM_SAMPLE_HPP
#define FGLM_SAMPLE_HPP

#include <string>
#include <vector>

#include "fglm/types.hpp"

namespace fglm {

/// A sample of n functions observed on one common argument grid.
/// Row i of `values` holds function i evaluated at the K grid points.
struct FunctionalSample {
  Vector grid;                   ///< K grid values, strictly increasing
  Matrix values;                 ///< n x K observations, all finite
  std::vector<std::string> ids;  ///< n unique function identifiers

  FunctionalSample() = default;

  /// Validates shapes, grid monotonicity, finiteness and id uniqueness;
  /// throws ShapeMismatchError / GridError / NonFiniteInputError /
  /// DuplicateIdError accordingly.
  FunctionalSample(Vector grid, Matrix values, std::vector<std::string> ids);

  Index n() const { return values.rows(); }
  Index k() const { return values.cols(); }
};

/// Convenience constructor that fabricates ids "f1".."fn".
FunctionalSample make_sample(Vector grid, Matrix values);

} // namespace fglm

#endif

#include "fglm/sample.hpp"

#include <unordered_set>

#include "fglm/errors.hpp"

namespace fglm {

FunctionalSample::FunctionalSample(Vector grid_in, Matrix values_in,
                                   std::vector<std::string> ids_in)
    : grid(std::move(grid_in)), values(std::move(values_in)), ids(std::move(ids_in)) {
  if (grid.size() < 2)
    throw GridError("argument grid needs at least 2 points, got " +
                    std::to_string(grid.size()));
  if (values.cols() != grid.size())
    throw ShapeMismatchError("values have " + std::to_string(values.cols()) +
                             " columns but grid has " + std::to_string(grid.size()) +
                             " points");
  if (static_cast<Index>(ids.size()) != values.rows())
    throw ShapeMismatchError("got " + std::to_string(ids.size()) + " ids for " +
                             std::to_string(values.rows()) + " functions");
  for (Index k = 0; k + 1 < grid.size(); ++k)
    if (!(grid[k] < grid[k + 1]))
      throw GridError("grid must be strictly increasing (violated at position " +
                      std::to_string(k + 1) + ")");
  if (!grid.allFinite() || !values.allFinite())
    throw NonFiniteInputError("sample contains NaN or infinite entries");

  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second)
      throw DuplicateIdError("duplicate function id '" + id + "'");
}

FunctionalSample make_sample(Vector grid, Matrix values) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(values.rows()));
  for (Index i = 0; i < values.rows(); ++i) ids.push_back("f" + std::to_string(i + 1));
  return FunctionalSample(std::move(grid), std::move(values), std::move(ids));
}

} // namespace fglm

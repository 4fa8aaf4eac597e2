#include "fglm/factor.hpp"

#include <unordered_map>

#include "fglm/errors.hpp"

namespace fglm {

Factor Factor::continuous(std::string name, std::vector<double> values) {
  Factor f;
  f.name = std::move(name);
  f.kind = FactorKind::continuous;
  f.values = std::move(values);
  for (double v : f.values)
    if (!std::isfinite(v))
      throw NonFiniteInputError("continuous factor '" + f.name + "' has a non-finite value");
  return f;
}

Factor Factor::categorical(std::string name, const std::vector<std::string>& obs_levels) {
  Factor f;
  f.name = std::move(name);
  f.kind = FactorKind::categorical;
  std::unordered_map<std::string, Index> index;
  for (const auto& lab : obs_levels) {
    auto [it, inserted] = index.try_emplace(lab, static_cast<Index>(f.levels.size()));
    if (inserted) f.levels.push_back(lab);
    f.level_index.push_back(it->second);
  }
  return f;
}

} // namespace fglm

#include <algorithm>
#include <set>

#include "bellkit/consistency.hpp"
#include "bellkit/error.hpp"

namespace bellkit {

const char* to_string(Cyclicity c) noexcept { return c == Cyclicity::acyclic ? "acyclic" : "cyclic"; }

Cyclicity vorobev_cyclicity(const std::vector<std::vector<std::string>>& subsets,
                            const std::vector<std::string>& variables) {
  if (subsets.empty()) throw Error(ErrorCode::invalid_argument, "no subsets given");
  std::vector<std::set<std::string>> edges;
  for (const auto& s : subsets) {
    if (s.empty()) throw Error(ErrorCode::invalid_argument, "empty subset");
    for (const auto& v : s)
      if (std::find(variables.begin(), variables.end(), v) == variables.end())
        throw Error(ErrorCode::invalid_argument, "unknown variable '" + v + "'");
    edges.emplace_back(s.begin(), s.end());
  }

  // Graham reduction: drop variables that occur in exactly one set, drop sets
  // contained in another set (or empty), until nothing changes.
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& e : edges) {
      for (auto it = e.begin(); it != e.end();) {
        const auto occurrences = std::count_if(edges.begin(), edges.end(), [&](const auto& f) { return f.contains(*it); });
        if (occurrences == 1) {
          it = e.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      bool contained = edges[i].empty();
      for (std::size_t j = 0; j < edges.size() && !contained; ++j) {
        if (j == i) continue;
        contained = std::includes(edges[j].begin(), edges[j].end(), edges[i].begin(), edges[i].end());
      }
      if (contained) {
        edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return edges.empty() ? Cyclicity::acyclic : Cyclicity::cyclic;
}

Cyclicity vorobev_cyclicity(const MarginalScenario& scenario) {
  std::vector<std::vector<std::string>> subsets;
  for (const auto& c : scenario.constraints) subsets.push_back(c.variables);
  return vorobev_cyclicity(subsets, scenario.variables);
}

}  // namespace bellkit

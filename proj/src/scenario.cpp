#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "bellkit/consistency.hpp"
#include "bellkit/error.hpp"
#include "scenario_internal.hpp"

namespace bellkit {

namespace {

std::string set_name(const std::vector<std::string>& vars) {
  std::string s = "{";
  for (std::size_t i = 0; i < vars.size(); ++i) s += (i ? "," : "") + vars[i];
  return s + "}";
}

// Marginal of a constraint table onto the variables at `keep` (indices into the
// constraint's own variable list, in order).
std::vector<double> sub_marginal(const MarginalConstraint& c, const std::vector<std::size_t>& keep) {
  const std::size_t k = c.variables.size();
  std::vector<double> out(std::size_t{1} << keep.size(), 0.0);
  for (std::size_t cell = 0; cell < c.table.size(); ++cell) {
    std::size_t r = 0;
    for (std::size_t q : keep) r = (r << 1) | ((cell >> (k - 1 - q)) & 1u);
    out[r] += c.table[cell];
  }
  return out;
}

}  // namespace

std::size_t MarginalScenario::index_of(const std::string& name) const {
  const auto it = std::find(variables.begin(), variables.end(), name);
  if (it == variables.end()) throw Error(ErrorCode::invalid_argument, "unknown variable '" + name + "'");
  return static_cast<std::size_t>(it - variables.begin());
}

void validate_scenario(const MarginalScenario& s) {
  if (s.variables.empty()) throw Error(ErrorCode::invalid_argument, "scenario declares no variables");
  const std::set<std::string> names(s.variables.begin(), s.variables.end());
  if (names.size() != s.variables.size()) throw Error(ErrorCode::invalid_argument, "duplicate variable name");
  if (s.constraints.empty()) throw Error(ErrorCode::invalid_argument, "scenario has no constraints");

  for (std::size_t ci = 0; ci < s.constraints.size(); ++ci) {
    const MarginalConstraint& c = s.constraints[ci];
    const std::string label = "constraint " + std::to_string(ci + 1) + " " + set_name(c.variables);
    if (c.variables.empty()) throw Error(ErrorCode::invalid_argument, "constraint " + std::to_string(ci + 1) + " is empty");
    std::set<std::string> seen;
    for (const std::string& v : c.variables) {
      s.index_of(v);
      if (!seen.insert(v).second) throw Error(ErrorCode::invalid_argument, label + " repeats " + v);
    }
    if (c.variables.size() > kMaxFeasibilityVariables)
      throw Error(ErrorCode::size_limit, label + " is too large");
    const std::size_t cells = std::size_t{1} << c.variables.size();
    if (c.table.size() != cells)
      throw Error(ErrorCode::invalid_argument, label + " has " + std::to_string(c.table.size()) +
                                                   " entries, expected " + std::to_string(cells));
    double sum = 0.0;
    for (double p : c.table) {
      if (!std::isfinite(p) || p < 0.0)
        throw Error(ErrorCode::invalid_argument, label + " has a negative or non-finite entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kTableTolerance) {
      std::ostringstream os;
      os << label << " sums to " << sum << ", not 1";
      throw Error(ErrorCode::invalid_argument, os.str());
    }
  }

  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    for (std::size_t j = i + 1; j < s.constraints.size(); ++j) {
      const MarginalConstraint& x = s.constraints[i];
      const MarginalConstraint& y = s.constraints[j];
      // Shared variables in scenario order.
      std::vector<std::size_t> shared;
      for (std::size_t v = 0; v < s.variables.size(); ++v) {
        const std::string& n = s.variables[v];
        if (std::count(x.variables.begin(), x.variables.end(), n) && std::count(y.variables.begin(), y.variables.end(), n))
          shared.push_back(v);
      }
      if (shared.empty()) continue;
      std::vector<std::size_t> kx, ky;
      std::vector<std::string> shared_names;
      for (std::size_t v : shared) {
        const std::string& n = s.variables[v];
        shared_names.push_back(n);
        kx.push_back(static_cast<std::size_t>(std::find(x.variables.begin(), x.variables.end(), n) - x.variables.begin()));
        ky.push_back(static_cast<std::size_t>(std::find(y.variables.begin(), y.variables.end(), n) - y.variables.begin()));
      }
      const auto mx = sub_marginal(x, kx);
      const auto my = sub_marginal(y, ky);
      for (std::size_t c = 0; c < mx.size(); ++c) {
        if (std::abs(mx[c] - my[c]) > kTableTolerance) {
          std::ostringstream os;
          os << "constraints " << i + 1 << " " << set_name(x.variables) << " and " << j + 1 << " "
             << set_name(y.variables) << " disagree on the marginal of " << set_name(shared_names)
             << " (cell " << c << ": " << mx[c] << " vs " << my[c] << ")";
          throw Error(ErrorCode::precondition, os.str());
        }
      }
    }
  }
}

std::vector<double> marginalize(const MarginalScenario& scenario, const std::vector<double>& joint,
                                const std::vector<std::string>& subset) {
  const std::size_t n = scenario.variables.size();
  if (joint.size() != (std::size_t{1} << n))
    throw Error(ErrorCode::invalid_argument, "joint table size does not match the variable count");
  std::vector<std::size_t> positions;
  for (const std::string& v : subset) positions.push_back(scenario.index_of(v));
  std::vector<double> out(std::size_t{1} << subset.size(), 0.0);
  for (std::uint64_t atom = 0; atom < joint.size(); ++atom)
    out[detail::restrict_atom(atom, n, positions)] += joint[atom];
  return out;
}

double chsh_facet_value(double e_ab, double e_ac, double e_db, double e_dc) noexcept {
  return e_ab + e_ac + e_db - e_dc;
}

double pair_table_expectation(const std::vector<double>& t) noexcept {
  return t.size() == 4 ? t[0] - t[1] - t[2] + t[3] : 0.0;
}

double certificate_value(const Certificate& cert, const MarginalScenario& scenario) {
  double v = 0.0;
  for (const CertificateTerm& term : cert.terms) {
    if (term.constraint >= scenario.constraints.size() ||
        term.cell >= scenario.constraints[term.constraint].table.size())
      throw Error(ErrorCode::invalid_argument, "certificate term out of range");
    v += term.coefficient * scenario.constraints[term.constraint].table[term.cell];
  }
  return v;
}

namespace detail {

std::vector<std::vector<std::size_t>> constraint_positions(const MarginalScenario& scenario) {
  std::vector<std::vector<std::size_t>> out;
  for (const MarginalConstraint& c : scenario.constraints) {
    std::vector<std::size_t> pos;
    for (const std::string& v : c.variables) pos.push_back(scenario.index_of(v));
    out.push_back(std::move(pos));
  }
  return out;
}

std::optional<Certificate> chsh_screen(const MarginalScenario& s) {
  const std::size_t n = s.variables.size();
  // Pair constraints keyed by their (unordered) variable pair.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge;
  for (std::size_t ci = 0; ci < s.constraints.size(); ++ci) {
    const auto& c = s.constraints[ci];
    if (c.variables.size() != 2) continue;
    std::size_t u = s.index_of(c.variables[0]), v = s.index_of(c.variables[1]);
    edge.emplace(std::minmax(u, v), ci);
  }
  auto find_edge = [&](std::size_t u, std::size_t v) -> std::optional<std::size_t> {
    const auto it = edge.find(std::minmax(u, v));
    if (it == edge.end()) return std::nullopt;
    return it->second;
  };

  std::optional<Certificate> best;
  double best_value = 2.0 + kFeasibilityTolerance;
  for (std::size_t v0 = 0; v0 < n; ++v0) {
    for (std::size_t v1 = v0 + 1; v1 < n; ++v1) {
      const auto e01 = find_edge(v0, v1);
      if (!e01) continue;
      for (std::size_t v3 = v1 + 1; v3 < n; ++v3) {
        const auto e30 = find_edge(v3, v0);
        if (!e30) continue;
        for (std::size_t v2 = v0 + 1; v2 < n; ++v2) {
          if (v2 == v1 || v2 == v3) continue;
          const auto e12 = find_edge(v1, v2);
          const auto e23 = find_edge(v2, v3);
          if (!e12 || !e23) continue;

          const std::array<std::size_t, 4> cycle{*e01, *e12, *e23, *e30};
          std::array<double, 4> e{};
          for (int k = 0; k < 4; ++k) e[k] = pair_table_expectation(s.constraints[cycle[k]].table);
          const double total = e[0] + e[1] + e[2] + e[3];
          // The 8 sign patterns: one negated edge, times an overall sign.
          for (int minus = 0; minus < 4; ++minus) {
            const double value = total - 2.0 * e[minus];
            const double orient = value >= 0 ? 1.0 : -1.0;
            if (std::abs(value) <= best_value) continue;
            best_value = std::abs(value);

            Certificate cert;
            cert.kind = "chsh";
            cert.bound = 2.0;
            cert.value = std::abs(value);
            std::string desc;
            for (int k = 0; k < 4; ++k) {
              const double sign = orient * (k == minus ? -1.0 : 1.0);
              const auto& c = s.constraints[cycle[k]];
              desc += (k == 0 ? (sign < 0 ? "-" : "") : (sign < 0 ? " - " : " + "));
              desc += "E(" + c.variables[0] + "," + c.variables[1] + ")";
              const std::array<double, 4> cell_sign{1.0, -1.0, -1.0, 1.0};
              for (std::size_t cell = 0; cell < 4; ++cell)
                cert.terms.push_back({cycle[k], cell, sign * cell_sign[cell]});
            }
            cert.description = desc;
            best = std::move(cert);
          }
        }
      }
    }
  }
  return best;
}

Certificate farkas_certificate(const MarginalScenario& s, const std::vector<double>& duals) {
  const std::size_t n = s.variables.size();
  const auto positions = constraint_positions(s);
  Certificate cert;
  cert.kind = "farkas";
  cert.description = "dual multipliers of the marginal-matching LP";
  std::vector<std::size_t> row_offset;
  std::size_t row = 1;  // row 0 is normalization
  for (std::size_t ci = 0; ci < s.constraints.size(); ++ci) {
    row_offset.push_back(row);
    for (std::size_t cell = 0; cell < s.constraints[ci].table.size(); ++cell, ++row) {
      if (duals[row] != 0.0) cert.terms.push_back({ci, cell, duals[row]});
    }
  }
  cert.value = certificate_value(cert, s);
  double bound = -std::numeric_limits<double>::infinity();
  for (std::uint64_t atom = 0; atom < (std::uint64_t{1} << n); ++atom) {
    double v = 0.0;
    for (std::size_t ci = 0; ci < s.constraints.size(); ++ci)
      v += duals[row_offset[ci] + restrict_atom(atom, n, positions[ci])];
    bound = std::max(bound, v);
  }
  cert.bound = bound;
  return cert;
}

}  // namespace detail
}  // namespace bellkit

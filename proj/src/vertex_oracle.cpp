// Brute-force route for the marginal problem: the feasible tables are the
// convex hull of the tables induced by the 2^n deterministic sign assignments.
// Membership is decided by an exact rational LP written independently of the
// solver behind joint_feasibility.

#include <gmpxx.h>

#include "bellkit/consistency.hpp"
#include "bellkit/error.hpp"
#include "scenario_internal.hpp"

namespace bellkit {

namespace {

struct HullFit {
  mpq_class residual;
  std::vector<mpq_class> weights;  // one per vertex
  std::vector<mpq_class> duals;    // one per row
};

// min sum(s) s.t. V w + s = target, w, s >= 0, with Bland's rule throughout.
HullFit fit_hull(const std::vector<std::vector<int>>& vertices, const std::vector<mpq_class>& target) {
  const std::size_t m = target.size();
  const std::size_t nv = vertices.size();
  const std::size_t ncol = nv + m;
  std::vector<std::vector<mpq_class>> t(m, std::vector<mpq_class>(ncol + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t v = 0; v < nv; ++v) t[i][v] = vertices[v][i];
    t[i][nv + i] = 1;
    t[i][ncol] = target[i];
    basis[i] = nv + i;
  }
  std::vector<mpq_class> z(ncol + 1);  // reduced costs, z[ncol] = -objective
  for (std::size_t j = 0; j <= ncol; ++j) {
    if (j >= nv && j < ncol) continue;
    for (std::size_t i = 0; i < m; ++i) z[j] -= t[i][j];
  }

  for (;;) {
    std::size_t q = ncol;
    for (std::size_t j = 0; j < ncol; ++j)
      if (sgn(z[j]) < 0) {
        q = j;
        break;
      }
    if (q == ncol) break;
    std::size_t p = m;
    mpq_class best;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(t[i][q]) <= 0) continue;
      mpq_class r = t[i][ncol] / t[i][q];
      if (p == m || r < best || (r == best && basis[i] < basis[p])) {
        p = i;
        best = r;
      }
    }
    if (p == m) break;
    const mpq_class piv = t[p][q];
    for (auto& x : t[p]) x /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == p || sgn(t[i][q]) == 0) continue;
      const mpq_class f = t[i][q];
      for (std::size_t j = 0; j <= ncol; ++j) t[i][j] -= f * t[p][j];
    }
    const mpq_class f = z[q];
    for (std::size_t j = 0; j <= ncol; ++j) z[j] -= f * t[p][j];
    basis[p] = q;
  }

  HullFit fit;
  fit.residual = -z[ncol];
  fit.weights.assign(nv, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < nv) fit.weights[basis[i]] = t[i][ncol];
  for (std::size_t i = 0; i < m; ++i) fit.duals.push_back(1 - z[nv + i]);
  return fit;
}

}  // namespace

FeasibilityResult deterministic_vertex_oracle(const MarginalScenario& scenario) {
  const std::size_t n = scenario.variables.size();
  if (n > kMaxOracleVariables) throw Error(ErrorCode::size_limit, "vertex oracle supports at most 10 variables");
  validate_scenario(scenario);
  const auto positions = detail::constraint_positions(scenario);

  // Row 0: weights sum to one; then every constraint cell.
  std::vector<mpq_class> target{1};
  for (const auto& c : scenario.constraints)
    for (double p : c.table) target.emplace_back(p);

  std::vector<std::vector<int>> vertices;
  vertices.reserve(std::size_t{1} << n);
  for (std::uint64_t assignment = 0; assignment < (std::uint64_t{1} << n); ++assignment) {
    std::vector<int> column(target.size(), 0);
    column[0] = 1;
    std::size_t offset = 1;
    for (std::size_t ci = 0; ci < scenario.constraints.size(); ++ci) {
      column[offset + detail::restrict_atom(assignment, n, positions[ci])] = 1;
      offset += scenario.constraints[ci].table.size();
    }
    vertices.push_back(std::move(column));
  }

  const HullFit fit = fit_hull(vertices, target);
  FeasibilityResult result;
  result.exact = true;
  result.residual = fit.residual.get_d();
  result.feasible = fit.residual <= mpq_class(1, 10000000);
  if (result.feasible) {
    std::vector<double> w;
    mpq_class total;
    for (const auto& x : fit.weights) total += x;
    for (const auto& x : fit.weights) w.push_back(mpq_class(x / total).get_d());
    result.witness = std::move(w);
  } else {
    std::vector<double> duals;
    for (const auto& y : fit.duals) duals.push_back(y.get_d());
    result.certificate = detail::farkas_certificate(scenario, duals);
  }
  return result;
}

}  // namespace bellkit

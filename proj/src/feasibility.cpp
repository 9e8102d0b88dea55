#include <cmath>

#include <gmpxx.h>

#include "bellkit/consistency.hpp"
#include "phase1_simplex.hpp"
#include "scenario_internal.hpp"

namespace bellkit {

namespace {

// Rows: normalization, then one row per constraint cell. Columns: atoms.
template <class T>
void build_lp(const MarginalScenario& s, std::vector<T>& matrix, std::vector<T>& rhs, std::size_t& rows,
              std::size_t& cols) {
  const std::size_t n = s.variables.size();
  const auto positions = detail::constraint_positions(s);
  cols = std::size_t{1} << n;
  rows = 1;
  for (const auto& c : s.constraints) rows += c.table.size();
  matrix.assign(rows * cols, T(0));
  rhs.assign(rows, T(0));

  for (std::size_t atom = 0; atom < cols; ++atom) matrix[atom] = T(1);
  rhs[0] = T(1);
  std::size_t offset = 1;
  for (std::size_t ci = 0; ci < s.constraints.size(); ++ci) {
    const auto& c = s.constraints[ci];
    for (std::size_t cell = 0; cell < c.table.size(); ++cell) rhs[offset + cell] = T(c.table[cell]);
    for (std::size_t atom = 0; atom < cols; ++atom)
      matrix[(offset + detail::restrict_atom(atom, n, positions[ci])) * cols + atom] = T(1);
    offset += c.table.size();
  }
}

std::vector<double> normalized_witness(const std::vector<double>& primal) {
  std::vector<double> w(primal.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < primal.size(); ++i) {
    w[i] = std::max(0.0, primal[i]);
    sum += w[i];
  }
  if (sum > 0.0)
    for (double& p : w) p /= sum;
  return w;
}

}  // namespace

FeasibilityResult joint_feasibility(const MarginalScenario& scenario) {
  if (scenario.variables.size() > kMaxFeasibilityVariables)
    throw Error(ErrorCode::size_limit, "joint feasibility supports at most 16 variables");
  validate_scenario(scenario);

  std::vector<double> matrix, rhs;
  std::size_t rows = 0, cols = 0;
  build_lp(scenario, matrix, rhs, rows, cols);
  auto sol = detail::solve_phase1<double>(rows, cols, matrix, rhs);

  FeasibilityResult result;
  result.residual = sol.residual;
  result.feasible = sol.residual <= kFeasibilityTolerance;
  std::vector<double> primal = sol.primal;
  std::vector<double> duals = sol.duals;

  // Near the tolerance the floating verdict could flip on rounding; decide it exactly.
  const bool near_boundary = sol.residual >= 0.1 * kFeasibilityTolerance && sol.residual <= 10.0 * kFeasibilityTolerance;
  if (near_boundary && scenario.variables.size() <= kMaxOracleVariables) {
    std::vector<mpq_class> qm, qr;
    build_lp(scenario, qm, qr, rows, cols);
    auto exact = detail::solve_phase1<mpq_class>(rows, cols, qm, qr);
    const mpq_class tolerance(1, 10000000);
    result.exact = true;
    result.feasible = exact.residual <= tolerance;
    result.residual = exact.residual.get_d();
    for (std::size_t i = 0; i < cols; ++i) primal[i] = exact.primal[i].get_d();
    for (std::size_t i = 0; i < rows; ++i) duals[i] = exact.duals[i].get_d();
  }

  if (result.feasible) {
    result.witness = normalized_witness(primal);
  } else {
    auto chsh = detail::chsh_screen(scenario);
    result.certificate = chsh ? std::move(*chsh) : detail::farkas_certificate(scenario, duals);
  }
  return result;
}

}  // namespace bellkit

#pragma once

#include <cstdint>
#include <vector>

#include "bellkit/consistency.hpp"

namespace bellkit::detail {

/// Positions of each constraint's variables in the scenario variable list.
std::vector<std::vector<std::size_t>> constraint_positions(const MarginalScenario& scenario);

/// Cell of a k-variable table selected by a full assignment (atom) of n
/// variables. Bit (n-1-i) of the atom is variable i; 1 means +1.
inline std::size_t restrict_atom(std::uint64_t atom, std::size_t n, const std::vector<std::size_t>& positions) {
  std::size_t cell = 0;
  for (std::size_t p : positions) cell = (cell << 1) | ((atom >> (n - 1 - p)) & 1u);
  return cell;
}

/// CHSH screen over every 4-cycle of pair constraints. Returns the certificate
/// with the largest violation if it exceeds 2 by more than the tolerance.
std::optional<Certificate> chsh_screen(const MarginalScenario& scenario);

/// Farkas certificate from phase-1 duals. duals[0] belongs to the
/// normalization row and cancels out of value - bound.
Certificate farkas_certificate(const MarginalScenario& scenario, const std::vector<double>& duals);

}  // namespace bellkit::detail

#pragma once

#include <array>

#include "bellkit/model.hpp"

namespace bellkit::quantum {

/// Joint distribution of two dichotomic variables of one setting pair.
/// cell[n][k] is the probability of first = (-1)^(n+1), second = (-1)^(k+1)
/// for n, k in {0, 1}; index 0 is the -1 outcome, index 1 the +1 outcome.
struct PairDistribution {
  std::array<std::array<double, 2>, 2> cell{};

  double probability(Outcome first, Outcome second) const noexcept {
    return cell[first.value() > 0][second.value() > 0];
  }
  /// Sum over cells of first*second*p.
  double product_expectation() const noexcept;
  /// Mean of the first (resp. second) variable.
  double first_mean() const noexcept;
  double second_mean() const noexcept;
  /// Cells in lexicographic order (-1,-1), (-1,+1), (+1,-1), (+1,+1).
  std::array<double, 4> flattened() const noexcept;
};

/// Quantum value of M(A_a A_b) for the singlet, i.e. a.b.
double pair_expectation_AA(const SettingVector& a, const SettingVector& b) noexcept;

/// Station-convention expectation M(A_a B_b) = -a.b (B = -A at equal settings).
double pair_expectation_AB(const SettingVector& a, const SettingVector& b) noexcept;

/// p(n, k) = (1 + s_n s_k a.b) / 4: the single-pair measure that reproduces
/// the singlet correlation with unbiased marginals.
PairDistribution joint_pair_distribution(const SettingVector& a, const SettingVector& b) noexcept;

/// <psi|sigma_a (x) sigma_b|psi> for psi = (|01> - |10>)/sqrt 2, computed with
/// explicit complex 4x4 algebra. Equals -a.b.
double singlet_tensor_expectation(const SettingVector& a, const SettingVector& b);

}  // namespace bellkit::quantum

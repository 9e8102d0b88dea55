#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bellkit/generators.hpp"
#include "bellkit/model.hpp"

namespace bellkit::chsh {

/// Occurrences of gamma = -4, -2, +2, +4 and 0 across J quadruples.
struct QuadrupleStats {
  std::uint64_t O = 0, P = 0, Q = 0, R = 0, S = 0;
  std::uint64_t J = 0;

  friend bool operator==(const QuadrupleStats&, const QuadrupleStats&) = default;
};

struct GammaReport {
  double M = 0;
  double delta = 0;
  std::int64_t gamma_sum = 0;  // exact sum of all gamma values
  QuadrupleStats stats;
  double r_bound_bound = 0;   // J * delta / 2
  bool r_bound_pass = true;
};

struct RBoundVerdict {
  bool applicable = false;  // delta > 0
  bool pass = true;
  double required = 0;      // J * delta / 2
  double slack = 0;         // R - J * delta / 2
  std::string message;
};

/// k-th gamma = p_AB[k] + p_AC[k] + p_DB[k] - p_DC[k] over the k-th record of
/// each block, in the order records appear. Throws invalid_argument when the
/// blocks have unequal sizes.
std::vector<int> gamma_exp(std::span<const TrialRecord> records);

/// Tallies O..S and computes M both as the direct mean and from the counts.
/// Throws invalid_argument on an empty list and corrupted_data on a value
/// outside {0, +-2, +-4}.
GammaReport expectation_M(std::span<const int> gammas);

/// Checks R >= J(M-2)/2 in integer arithmetic (2R >= sum - 2J).
RBoundVerdict r_bound_audit(const GammaReport& report);

struct CommonSpaceResult {
  std::vector<int> gammas;
  GammaReport report;
};

/// Gamma on a common probability space: every value must be -2 or +2. Throws
/// model_violation otherwise, or if a record's products disagree with its outcomes.
CommonSpaceResult gamma_common(std::span<const QuadrupleRecord> records);

/// The same check applied to block-structured records (k-th trial of each block).
/// Separate-space data at CHSH-violating settings fails here.
CommonSpaceResult gamma_common(std::span<const TrialRecord> records);

/// Empirical statistics of one setting pair.
struct PairStats {
  PairLabel label = PairLabel::AB;
  std::uint64_t count = 0;
  std::int64_t product_sum = 0;
  std::array<std::uint64_t, 4> cells{};  // (-,-), (-,+), (+,-), (+,+)

  double mean() const noexcept;
  /// sqrt((1 - mean^2) / count).
  double standard_error() const noexcept;
};

std::array<PairStats, 4> pair_stats(std::span<const TrialRecord> records);
std::array<PairStats, 4> pair_stats(std::span<const QuadrupleRecord> records);

}  // namespace bellkit::chsh

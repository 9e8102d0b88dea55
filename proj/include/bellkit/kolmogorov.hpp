#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bellkit {

/// Joint table of a d-dimensional +-1 vector process at an ordered tuple of
/// times. Cell layout: one block of d bits per time (first time most
/// significant), first component most significant inside a block, bit 0
/// meaning -1 and bit 1 meaning +1.
struct TimedTable {
  std::vector<std::uint64_t> times;
  std::vector<double> probabilities;
};

struct ProcessFamily {
  int dimension = 1;  // d, 1..4
  std::vector<std::uint64_t> times;
  std::vector<TimedTable> tables;
};

enum class KolmogorovCondition { normalization, non_negativity, marginalization, permutation_symmetry };

const char* to_string(KolmogorovCondition condition) noexcept;

struct KolmogorovViolation {
  KolmogorovCondition condition;
  std::string detail;
};

struct KolmogorovReport {
  bool consistent = true;
  std::vector<KolmogorovViolation> violations;

  /// Name of the first violated condition, or "consistent".
  std::string reason() const;
};

inline constexpr double kKolmogorovTolerance = 1e-9;

/// Checks normalization, non-negativity, marginalization over a dropped time
/// and invariance under reordering the time arguments. Marginalization and
/// symmetry are checked for every pair of tables the family actually holds.
/// Throws invalid_argument for malformed tables.
KolmogorovReport check_kolmogorov(const ProcessFamily& family);

/// Family of i.i.d. copies of `single` (a table over one time, 2^d cells):
/// one table per ordered tuple of distinct times of length 1..max_order.
ProcessFamily iid_family(int dimension, const std::vector<double>& single,
                         const std::vector<std::uint64_t>& times, int max_order);

}  // namespace bellkit

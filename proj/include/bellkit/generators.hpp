#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bellkit/kolmogorov.hpp"
#include "bellkit/model.hpp"

namespace bellkit {

/// Realized source variable for one entangled pair: a point on the unit sphere.
struct HiddenState {
  double x = 0, y = 0, z = 1;
};

/// Key of a station-local instrument parameter lambda_x(t, s).
struct InstrumentContext {
  char setting = 'a';  // 'a', 'b', 'c' or 'd'
  std::uint64_t time_index = 0;
  std::uint64_t context_seed = 0;  // stands in for the station's light-cone parameters

  /// The instrument parameter in [0, 1) for this key. Pure function of the key.
  double draw() const noexcept;
};

/// One trial of the common-space model: all four outcomes come from the same
/// hidden state. Outcomes are ordered A_a, A_d, B_b, B_c; products are ordered
/// AB, AC, DB, DC.
struct QuadrupleRecord {
  std::uint64_t trial_index = 0;
  std::array<Outcome, 4> outcomes{};
  std::array<int, 4> products{};

  static QuadrupleRecord from_outcomes(std::uint64_t trial_index, Outcome a_a, Outcome a_d,
                                       Outcome b_b, Outcome b_c);
  /// True if every product equals the product of its two stored outcomes.
  bool coherent() const noexcept;
  friend bool operator==(const QuadrupleRecord&, const QuadrupleRecord&) = default;
};

struct GeneratorOptions {
  unsigned threads = 1;
};

/// Separate probability spaces: J trials per setting pair, each pair with its
/// own substream and its own block of time indices [kJ, (k+1)J). Output is
/// ordered AB block, AC block, DB block, DC block. Outcomes sample the
/// single-pair quantum measure directly, so E[a_outcome * b_outcome] = +s1.s2.
std::vector<TrialRecord> run_per_pair(const ExperimentPlan& plan, GeneratorOptions options = {});

/// Bell's common space: one hidden state per trial, A_x = sign(x.lambda) with
/// ties to +1, B_y = -A_y, all four products evaluated on the same state.
std::vector<QuadrupleRecord> run_common_space(const ExperimentPlan& plan,
                                              GeneratorOptions options = {});

/// Sign model evaluated for a single hidden state.
Outcome sign_model_outcome(const SettingVector& setting, const HiddenState& lambda) noexcept;

/// Uniform point on the sphere from cos(theta) ~ U[-1,1], phi ~ U[0, 2pi).
HiddenState sample_hidden_state(double u_cos, double u_phi) noexcept;

/// Instrument-augmented local model. Station 1 reads its (setting, time)
/// instrument parameter u and reports +1 iff u < 1/2; station 2 combines the
/// shared source variable with its own instrument parameter into w and reports
/// B = A iff w < (1 + s1.s2)/2. Same record layout as run_per_pair.
std::vector<TrialRecord> run_instrument(const ExperimentPlan& plan, GeneratorOptions options = {});

/// Joint-probability family of the vector process (A_a, A_b, B_b, B_c) when
/// two settings of one station are mutually exclusive at each time: every
/// table is zero. Throws invalid_argument on an empty time list.
ProcessFamily degenerate_exclusive_family(const SettingVector& first, const SettingVector& second,
                                          const std::vector<std::uint64_t>& times);

/// Counterfactual same-setting quadruple: 4 * product for every record.
/// Throws invalid_argument if the records mix setting pairs.
std::vector<int> same_setting_quadruple(const std::vector<TrialRecord>& records);

}  // namespace bellkit

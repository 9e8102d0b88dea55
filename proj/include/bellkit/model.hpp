#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "bellkit/error.hpp"

namespace bellkit {

/// Analyzer orientation: a unit vector in R^3.
class SettingVector {
 public:
  /// Throws invalid_argument unless the components have unit norm within 1e-12.
  SettingVector(double x, double y, double z);

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double z() const noexcept { return z_; }

  friend bool operator==(const SettingVector&, const SettingVector&) = default;

 private:
  double x_, y_, z_;
};

/// Spherical construction (sin t cos p, sin t sin p, cos t) from degrees.
/// Planar settings use phi = 0, i.e. the x-z plane.
SettingVector make_setting(double theta_deg, double phi_deg = 0.0);

/// Inner product, clamped to [-1, 1] when it overshoots by at most 1e-12.
double dot(const SettingVector& a, const SettingVector& b) noexcept;

/// A dichotomic measurement result, always -1 or +1.
class Outcome {
 public:
  constexpr Outcome() = default;
  /// Throws corrupted_data for anything but -1 or +1.
  explicit Outcome(int value);

  static constexpr Outcome plus() { return Outcome{Tag{}, 1}; }
  static constexpr Outcome minus() { return Outcome{Tag{}, -1}; }

  constexpr int value() const noexcept { return value_; }
  constexpr Outcome operator-() const noexcept { return Outcome{Tag{}, -value_}; }
  friend constexpr int operator*(Outcome a, Outcome b) noexcept { return a.value_ * b.value_; }
  friend constexpr bool operator==(Outcome, Outcome) = default;

 private:
  struct Tag {};
  constexpr Outcome(Tag, int v) : value_(v) {}
  int value_ = 1;
};

/// The four CHSH setting pairs (a,b), (a,c), (d,b), (d,c). The enumerator
/// value doubles as the separate-space block index.
enum class PairLabel : std::uint8_t { AB = 0, AC = 1, DB = 2, DC = 3 };

inline constexpr std::array<PairLabel, 4> kAllPairs{PairLabel::AB, PairLabel::AC, PairLabel::DB,
                                                    PairLabel::DC};

std::string_view to_string(PairLabel label) noexcept;
/// Throws parse on an unknown label.
PairLabel parse_pair_label(std::string_view text);

inline constexpr std::size_t block_index(PairLabel label) noexcept {
  return static_cast<std::size_t>(label);
}

enum class Mode : std::uint8_t { per_pair, common_space, instrument };

std::string_view to_string(Mode mode) noexcept;
/// Accepts "per-pair", "common-space" and "instrument".
Mode parse_mode(std::string_view text);

/// The four analyzer orientations. Station 1 uses a and d, station 2 uses b and c.
struct Settings {
  SettingVector a, b, c, d;
};

struct SettingPairId {
  PairLabel label;
  SettingVector station1;
  SettingVector station2;
};

SettingPairId setting_pair(const Settings& settings, PairLabel label);

/// One entangled-pair measurement event.
struct TrialRecord {
  std::uint64_t trial_index = 0;
  PairLabel pair = PairLabel::AB;
  std::uint64_t time_index = 0;
  Outcome a_outcome;
  Outcome b_outcome;

  int product() const noexcept { return a_outcome * b_outcome; }
  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct ExperimentPlan {
  Settings settings;
  std::uint64_t trials_per_pair = 0;
  std::uint64_t seed = 0;
  Mode mode = Mode::per_pair;

  /// Throws invalid_plan when trials_per_pair is zero.
  void validate() const;
};

}  // namespace bellkit

#include "bellkit/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bellkit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::invalid_plan: return "invalid plan";
    case ErrorCode::corrupted_data: return "corrupted data";
    case ErrorCode::model_violation: return "model violation";
    case ErrorCode::size_limit: return "size limit";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::io: return "I/O error";
  }
  return "unknown";
}

SettingVector::SettingVector(double x, double y, double z) : x_(x), y_(y), z_(z) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-12)
    throw Error(ErrorCode::invalid_argument, "setting vector is not unit norm");
}

SettingVector make_setting(double theta_deg, double phi_deg) {
  if (!std::isfinite(theta_deg) || !std::isfinite(phi_deg))
    throw Error(ErrorCode::invalid_argument, "setting angles must be finite");
  const double deg = std::numbers::pi / 180.0;
  const double t = theta_deg * deg;
  const double p = phi_deg * deg;
  const double x = std::sin(t) * std::cos(p);
  const double y = std::sin(t) * std::sin(p);
  const double z = std::cos(t);
  // Trigonometric rounding can leave the norm a few ulp off; renormalize once.
  const double n = std::sqrt(x * x + y * y + z * z);
  return SettingVector(x / n, y / n, z / n);
}

double dot(const SettingVector& a, const SettingVector& b) noexcept {
  const double d = a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
  if (d > 1.0 && d - 1.0 <= 1e-12) return 1.0;
  if (d < -1.0 && -1.0 - d <= 1e-12) return -1.0;
  return d;
}

Outcome::Outcome(int value) : value_(value) {
  if (value != 1 && value != -1)
    throw Error(ErrorCode::corrupted_data, "outcome must be -1 or +1, got " + std::to_string(value));
}

std::string_view to_string(PairLabel label) noexcept {
  switch (label) {
    case PairLabel::AB: return "AB";
    case PairLabel::AC: return "AC";
    case PairLabel::DB: return "DB";
    case PairLabel::DC: return "DC";
  }
  return "??";
}

PairLabel parse_pair_label(std::string_view text) {
  for (PairLabel label : kAllPairs)
    if (to_string(label) == text) return label;
  throw Error(ErrorCode::parse, "unknown setting pair '" + std::string(text) + "'");
}

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::per_pair: return "per-pair";
    case Mode::common_space: return "common-space";
    case Mode::instrument: return "instrument";
  }
  return "??";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::per_pair, Mode::common_space, Mode::instrument})
    if (to_string(m) == text) return m;
  throw Error(ErrorCode::invalid_argument, "unknown mode '" + std::string(text) + "'");
}

SettingPairId setting_pair(const Settings& s, PairLabel label) {
  switch (label) {
    case PairLabel::AB: return {label, s.a, s.b};
    case PairLabel::AC: return {label, s.a, s.c};
    case PairLabel::DB: return {label, s.d, s.b};
    case PairLabel::DC: return {label, s.d, s.c};
  }
  throw Error(ErrorCode::invalid_argument, "bad pair label");
}

void ExperimentPlan::validate() const {
  if (trials_per_pair == 0) throw Error(ErrorCode::invalid_plan, "trials per pair must be at least 1");
}

}  // namespace bellkit

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "bellkit/generators.hpp"
#include "bellkit/model.hpp"

namespace bellkit {

inline constexpr const char* kTrialLogHeader =
    "trial_index,block,setting_pair,time_index,a_outcome,b_outcome";

/// Contents of a trial log: either separate-space blocks (rows with block
/// sep0..sep3) or common-space quadruples (four `common` rows per trial).
using TrialData = std::variant<std::vector<TrialRecord>, std::vector<QuadrupleRecord>>;

void write_trial_log(std::ostream& out, const TrialData& data);
void write_trial_log(const std::filesystem::path& path, const TrialData& data);  // throws io

/// Parses a log. Throws parse with the 1-based line number of the first bad
/// row, and parse for an empty log (no data rows).
TrialData read_trial_log(std::istream& in);
TrialData read_trial_log(const std::filesystem::path& path);  // throws io if unreadable

}  // namespace bellkit

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bellkit/consistency.hpp"

namespace bellkit {

// Scenario text format:
//
//   # comment
//   variables: Aa Ad Bb Bc
//   constraint: Aa Bb
//     0.4267766952966369 0.0732233047033631
//     0.0732233047033631 0.4267766952966369
//
// Each `constraint:` line opens a table; the numbers that follow (decimal or
// p/q, any line breaks) are its 2^k cells in lexicographic order, -1 first.
MarginalScenario parse_scenario(std::istream& in);
MarginalScenario load_scenario(const std::filesystem::path& path);

void write_scenario(std::ostream& out, const MarginalScenario& scenario);

}  // namespace bellkit

#include "bellkit/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bellkit::chsh {

namespace {

std::array<std::vector<int>, 4> products_by_block(std::span<const TrialRecord> records) {
  std::array<std::vector<int>, 4> blocks;
  for (const TrialRecord& r : records) blocks[block_index(r.pair)].push_back(r.product());
  const std::size_t J = blocks[0].size();
  for (const auto& b : blocks) {
    if (b.size() != J)
      throw Error(ErrorCode::invalid_argument,
                  "setting-pair blocks have unequal sizes (" + std::to_string(blocks[0].size()) + ", " +
                      std::to_string(blocks[1].size()) + ", " + std::to_string(blocks[2].size()) + ", " +
                      std::to_string(blocks[3].size()) + ")");
  }
  return blocks;
}

CommonSpaceResult finish_common(std::vector<int> gammas) {
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    if (gammas[k] != 2 && gammas[k] != -2)
      throw Error(ErrorCode::model_violation,
                  "gamma = " + std::to_string(gammas[k]) + " at quadruple " + std::to_string(k) +
                      "; a common probability space only admits -2 or +2");
  }
  CommonSpaceResult result{std::move(gammas), {}};
  result.report = expectation_M(result.gammas);
  const auto& st = result.report.stats;
  if (st.O != 0 || st.R != 0 || st.S != 0 || result.report.gamma_sum > 2 * static_cast<std::int64_t>(st.J))
    throw Error(ErrorCode::model_violation, "common-space postcondition violated");
  return result;
}

}  // namespace

std::vector<int> gamma_exp(std::span<const TrialRecord> records) {
  const auto blocks = products_by_block(records);
  const std::size_t J = blocks[0].size();
  std::vector<int> gammas(J);
  for (std::size_t k = 0; k < J; ++k)
    gammas[k] = blocks[0][k] + blocks[1][k] + blocks[2][k] - blocks[3][k];
  return gammas;
}

GammaReport expectation_M(std::span<const int> gammas) {
  if (gammas.empty()) throw Error(ErrorCode::invalid_argument, "no gamma values");
  GammaReport rep;
  QuadrupleStats& st = rep.stats;
  std::int64_t direct = 0;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const int g = gammas[k];
    switch (g) {
      case -4: ++st.O; break;
      case -2: ++st.P; break;
      case 2: ++st.Q; break;
      case 4: ++st.R; break;
      case 0: ++st.S; break;
      default:
        throw Error(ErrorCode::corrupted_data,
                    "gamma value " + std::to_string(g) + " at index " + std::to_string(k) +
                        " is outside {0, +-2, +-4}");
    }
    direct += g;
  }
  st.J = gammas.size();
  const auto count = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };
  const std::int64_t from_counts = -4 * count(st.O) - 2 * count(st.P) + 2 * count(st.Q) + 4 * count(st.R);
  if (from_counts != direct || st.O + st.P + st.Q + st.R + st.S != st.J)
    throw Error(ErrorCode::corrupted_data, "gamma tally does not reconcile");

  rep.gamma_sum = direct;
  rep.M = static_cast<double>(direct) / static_cast<double>(st.J);
  rep.delta = rep.M - 2.0;
  rep.r_bound_bound = static_cast<double>(st.J) * rep.delta / 2.0;
  rep.r_bound_pass = r_bound_audit(rep).pass;
  return rep;
}

RBoundVerdict r_bound_audit(const GammaReport& report) {
  const QuadrupleStats& st = report.stats;
  const auto J = static_cast<std::int64_t>(st.J);
  const auto R = static_cast<std::int64_t>(st.R);
  // J * delta = sum - 2J exactly.
  const std::int64_t j_delta = report.gamma_sum - 2 * J;

  RBoundVerdict v;
  v.required = static_cast<double>(j_delta) / 2.0;
  v.slack = static_cast<double>(R) - v.required;
  v.applicable = j_delta > 0;
  if (!v.applicable) {
    v.pass = true;
    v.message = "M <= 2: bound is vacuous";
    return v;
  }
  v.pass = 2 * R >= j_delta;
  v.message = v.pass ? "R >= J*delta/2 holds with slack " + std::to_string(v.slack)
                     : "R < J*delta/2: counts are inconsistent with M";
  return v;
}

CommonSpaceResult gamma_common(std::span<const QuadrupleRecord> records) {
  std::vector<int> gammas;
  gammas.reserve(records.size());
  for (const QuadrupleRecord& r : records) {
    if (!r.coherent())
      throw Error(ErrorCode::model_violation,
                  "quadruple " + std::to_string(r.trial_index) + " has products that disagree with its outcomes");
    gammas.push_back(r.products[0] + r.products[1] + r.products[2] - r.products[3]);
  }
  return finish_common(std::move(gammas));
}

CommonSpaceResult gamma_common(std::span<const TrialRecord> records) {
  return finish_common(gamma_exp(records));
}

double PairStats::mean() const noexcept {
  return count == 0 ? 0.0 : static_cast<double>(product_sum) / static_cast<double>(count);
}

double PairStats::standard_error() const noexcept {
  if (count == 0) return 0.0;
  const double m = mean();
  return std::sqrt(std::max(0.0, 1.0 - m * m) / static_cast<double>(count));
}

namespace {

void tally(PairStats& ps, Outcome a, Outcome b) {
  ++ps.count;
  ps.product_sum += a * b;
  ++ps.cells[2 * (a.value() > 0) + (b.value() > 0)];
}

}  // namespace

std::array<PairStats, 4> pair_stats(std::span<const TrialRecord> records) {
  std::array<PairStats, 4> out;
  for (PairLabel l : kAllPairs) out[block_index(l)].label = l;
  for (const TrialRecord& r : records) tally(out[block_index(r.pair)], r.a_outcome, r.b_outcome);
  return out;
}

std::array<PairStats, 4> pair_stats(std::span<const QuadrupleRecord> records) {
  std::array<PairStats, 4> out;
  for (PairLabel l : kAllPairs) out[block_index(l)].label = l;
  for (const QuadrupleRecord& r : records) {
    const auto [a_a, a_d, b_b, b_c] = r.outcomes;
    tally(out[0], a_a, b_b);
    tally(out[1], a_a, b_c);
    tally(out[2], a_d, b_b);
    tally(out[3], a_d, b_c);
  }
  return out;
}

}  // namespace bellkit::chsh

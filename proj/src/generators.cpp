#include "bellkit/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "bellkit/substream.hpp"

namespace bellkit {

namespace {

// Runs work(unit) for unit in [0, units) on up to `threads` workers. Each unit
// writes a disjoint slice of the output, so scheduling never affects results.
void parallel_units(std::uint64_t units, unsigned threads,
                    const std::function<void(std::uint64_t)>& work) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, threads), units));
  if (workers <= 1) {
    for (std::uint64_t u = 0; u < units; ++u) work(u);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t u = w; u < units; u += workers) work(u);
    });
  }
  for (auto& t : pool) t.join();
}

std::uint64_t chunk_count(std::uint64_t trials) { return (trials + kChunkSize - 1) / kChunkSize; }

void require_mode(const ExperimentPlan& plan, Mode mode) {
  plan.validate();
  if (plan.mode != mode)
    throw Error(ErrorCode::invalid_plan, "plan mode is " + std::string(to_string(plan.mode)) +
                                             ", expected " + std::string(to_string(mode)));
}

Outcome from_bool(bool plus) { return plus ? Outcome::plus() : Outcome::minus(); }

double raw_dot(const SettingVector& s, const HiddenState& l) {
  return s.x() * l.x + s.y() * l.y + s.z() * l.z;
}

char station1_setting(PairLabel label) {
  return label == PairLabel::AB || label == PairLabel::AC ? 'a' : 'd';
}

char station2_setting(PairLabel label) {
  return label == PairLabel::AB || label == PairLabel::DB ? 'b' : 'c';
}

}  // namespace

double InstrumentContext::draw() const noexcept {
  return keyed_uniform(context_seed, static_cast<std::uint64_t>(setting), time_index);
}

QuadrupleRecord QuadrupleRecord::from_outcomes(std::uint64_t trial_index, Outcome a_a, Outcome a_d,
                                               Outcome b_b, Outcome b_c) {
  QuadrupleRecord r;
  r.trial_index = trial_index;
  r.outcomes = {a_a, a_d, b_b, b_c};
  r.products = {a_a * b_b, a_a * b_c, a_d * b_b, a_d * b_c};
  return r;
}

bool QuadrupleRecord::coherent() const noexcept {
  const auto [a_a, a_d, b_b, b_c] = outcomes;
  return products[0] == a_a * b_b && products[1] == a_a * b_c && products[2] == a_d * b_b &&
         products[3] == a_d * b_c;
}

std::vector<TrialRecord> run_per_pair(const ExperimentPlan& plan, GeneratorOptions options) {
  require_mode(plan, Mode::per_pair);
  const std::uint64_t J = plan.trials_per_pair;
  const std::uint64_t chunks = chunk_count(J);
  std::vector<TrialRecord> records(4 * J);

  parallel_units(4 * chunks, options.threads, [&](std::uint64_t unit) {
    const std::uint64_t block = unit / chunks;
    const std::uint64_t chunk = unit % chunks;
    const PairLabel label = kAllPairs[block];
    const SettingPairId pair = setting_pair(plan.settings, label);
    const double p_equal = 0.5 * (1.0 + dot(pair.station1, pair.station2));

    auto engine = make_substream(plan.seed, StreamTag::pair_sampler, block, chunk);
    const std::uint64_t end = std::min(J, (chunk + 1) * kChunkSize);
    for (std::uint64_t t = chunk * kChunkSize; t < end; ++t) {
      const Outcome a = from_bool(uniform01(engine) < 0.5);
      const Outcome b = uniform01(engine) < p_equal ? a : -a;
      records[block * J + t] = TrialRecord{t, label, block * J + t, a, b};
    }
  });
  return records;
}

HiddenState sample_hidden_state(double u_cos, double u_phi) noexcept {
  const double z = 2.0 * u_cos - 1.0;
  const double phi = 2.0 * std::numbers::pi * u_phi;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return HiddenState{r * std::cos(phi), r * std::sin(phi), z};
}

Outcome sign_model_outcome(const SettingVector& setting, const HiddenState& lambda) noexcept {
  return from_bool(raw_dot(setting, lambda) >= 0.0);
}

std::vector<QuadrupleRecord> run_common_space(const ExperimentPlan& plan, GeneratorOptions options) {
  require_mode(plan, Mode::common_space);
  const std::uint64_t J = plan.trials_per_pair;
  const std::uint64_t chunks = chunk_count(J);
  const Settings& s = plan.settings;
  std::vector<QuadrupleRecord> records(J);

  parallel_units(chunks, options.threads, [&](std::uint64_t chunk) {
    auto engine = make_substream(plan.seed, StreamTag::source, 0, chunk);
    const std::uint64_t end = std::min(J, (chunk + 1) * kChunkSize);
    for (std::uint64_t t = chunk * kChunkSize; t < end; ++t) {
      const double u_cos = uniform01(engine);
      const double u_phi = uniform01(engine);
      const HiddenState lambda = sample_hidden_state(u_cos, u_phi);
      records[t] = QuadrupleRecord::from_outcomes(
          t, sign_model_outcome(s.a, lambda), sign_model_outcome(s.d, lambda),
          -sign_model_outcome(s.b, lambda), -sign_model_outcome(s.c, lambda));
    }
  });
  return records;
}

std::vector<TrialRecord> run_instrument(const ExperimentPlan& plan, GeneratorOptions options) {
  require_mode(plan, Mode::instrument);
  const std::uint64_t J = plan.trials_per_pair;
  const std::uint64_t chunks = chunk_count(J);
  const std::uint64_t station1_seed = mix64(plan.seed ^ static_cast<std::uint64_t>(StreamTag::instrument_station1));
  const std::uint64_t station2_seed = mix64(plan.seed ^ static_cast<std::uint64_t>(StreamTag::instrument_station2));
  std::vector<TrialRecord> records(4 * J);

  parallel_units(4 * chunks, options.threads, [&](std::uint64_t unit) {
    const std::uint64_t block = unit / chunks;
    const std::uint64_t chunk = unit % chunks;
    const PairLabel label = kAllPairs[block];
    const SettingPairId pair = setting_pair(plan.settings, label);
    const double p_equal = 0.5 * (1.0 + dot(pair.station1, pair.station2));

    auto source = make_substream(plan.seed, StreamTag::source, block, chunk);
    const std::uint64_t end = std::min(J, (chunk + 1) * kChunkSize);
    for (std::uint64_t t = chunk * kChunkSize; t < end; ++t) {
      const std::uint64_t time = block * J + t;
      const double u_cos = uniform01(source);
      const double u_phi = uniform01(source);
      const HiddenState lambda = sample_hidden_state(u_cos, u_phi);
      const double shared = 0.5 * (1.0 + lambda.z);  // uniform on [0, 1]

      const double u = InstrumentContext{station1_setting(label), time, station1_seed}.draw();
      const double v = InstrumentContext{station2_setting(label), time, station2_seed}.draw();
      double w = shared + v;
      w -= std::floor(w);

      const Outcome a = from_bool(u < 0.5);
      const Outcome b = w < p_equal ? a : -a;
      records[block * J + t] = TrialRecord{t, label, time, a, b};
    }
  });
  return records;
}

ProcessFamily degenerate_exclusive_family(const SettingVector&, const SettingVector&,
                                          const std::vector<std::uint64_t>& times) {
  if (times.empty()) throw Error(ErrorCode::invalid_argument, "degenerate family needs at least one time index");
  // (A_a, A_b, B_b, B_c): A_a and A_b cannot both be measured at one time, so
  // every event of the vector process is impossible.
  ProcessFamily family;
  family.dimension = 4;
  family.times = times;
  for (std::uint64_t t : times) family.tables.push_back(TimedTable{{t}, std::vector<double>(16, 0.0)});
  return family;
}

std::vector<int> same_setting_quadruple(const std::vector<TrialRecord>& records) {
  std::vector<int> out;
  out.reserve(records.size());
  for (const TrialRecord& r : records) {
    if (r.pair != records.front().pair)
      throw Error(ErrorCode::invalid_argument, "same-setting quadruple needs records of one setting pair");
    out.push_back(4 * r.product());
  }
  return out;
}

}  // namespace bellkit

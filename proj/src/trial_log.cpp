#include "bellkit/trial_log.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <string>

namespace bellkit {

namespace {

void append_row(std::string& buf, std::uint64_t trial, std::string_view block, PairLabel pair,
                std::uint64_t time, Outcome a, Outcome b) {
  char num[24];
  auto put = [&](auto v) {
    const auto res = std::to_chars(num, num + sizeof num, v);
    buf.append(num, res.ptr);
  };
  put(trial);
  buf += ',';
  buf += block;
  buf += ',';
  buf += to_string(pair);
  buf += ',';
  put(time);
  buf += ',';
  put(a.value());
  buf += ',';
  put(b.value());
  buf += '\n';
}

constexpr std::string_view kSeparateBlocks[4] = {"sep0", "sep1", "sep2", "sep3"};
constexpr std::string_view kCommonBlock = "common";

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::parse, "trial log line " + std::to_string(line) + ": " + what);
}

template <class Int>
Int parse_int(std::string_view field, std::size_t line, const char* name) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    fail(line, std::string("bad ") + name + " '" + std::string(field) + "'");
  return v;
}

Outcome parse_outcome(std::string_view field, std::size_t line, const char* name) {
  const int v = parse_int<int>(field, line, name);
  if (v != 1 && v != -1) fail(line, std::string(name) + " must be -1 or +1, got " + std::string(field));
  return Outcome(v);
}

}  // namespace

void write_trial_log(std::ostream& out, const TrialData& data) {
  std::string buf;
  buf += kTrialLogHeader;
  buf += '\n';
  if (const auto* sep = std::get_if<std::vector<TrialRecord>>(&data)) {
    buf.reserve(buf.size() + sep->size() * 32);
    for (const TrialRecord& r : *sep)
      append_row(buf, r.trial_index, kSeparateBlocks[block_index(r.pair)], r.pair, r.time_index, r.a_outcome,
                 r.b_outcome);
  } else {
    const auto& quads = std::get<std::vector<QuadrupleRecord>>(data);
    buf.reserve(buf.size() + quads.size() * 4 * 34);
    for (const QuadrupleRecord& q : quads) {
      const auto [a_a, a_d, b_b, b_c] = q.outcomes;
      append_row(buf, q.trial_index, kCommonBlock, PairLabel::AB, q.trial_index, a_a, b_b);
      append_row(buf, q.trial_index, kCommonBlock, PairLabel::AC, q.trial_index, a_a, b_c);
      append_row(buf, q.trial_index, kCommonBlock, PairLabel::DB, q.trial_index, a_d, b_b);
      append_row(buf, q.trial_index, kCommonBlock, PairLabel::DC, q.trial_index, a_d, b_c);
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_trial_log(const std::filesystem::path& path, const TrialData& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write trial log " + path.string());
  write_trial_log(out, data);
  out.flush();
  if (!out) throw Error(ErrorCode::io, "failed writing trial log " + path.string());
}

TrialData read_trial_log(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next()) throw Error(ErrorCode::parse, "trial log is empty");
  if (line != kTrialLogHeader) fail(line_no, "expected header '" + std::string(kTrialLogHeader) + "'");

  std::vector<TrialRecord> separate;
  struct Partial {
    std::array<std::optional<std::pair<Outcome, Outcome>>, 4> rows;
    std::size_t first_line = 0;
  };
  std::map<std::uint64_t, Partial> common;
  std::size_t rows = 0;

  while (next()) {
    if (line.empty()) continue;
    std::array<std::string_view, 6> f;
    std::string_view rest = line;
    for (std::size_t i = 0; i < 6; ++i) {
      const auto comma = rest.find(',');
      if (i < 5 && comma == std::string_view::npos) fail(line_no, "expected 6 comma-separated fields");
      f[i] = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (f[5].find(',') != std::string_view::npos) fail(line_no, "expected 6 comma-separated fields");

    const auto trial = parse_int<std::uint64_t>(f[0], line_no, "trial_index");
    PairLabel pair;
    try {
      pair = parse_pair_label(f[2]);
    } catch (const Error&) {
      fail(line_no, "unknown setting_pair '" + std::string(f[2]) + "'");
    }
    const auto time = parse_int<std::uint64_t>(f[3], line_no, "time_index");
    const Outcome a = parse_outcome(f[4], line_no, "a_outcome");
    const Outcome b = parse_outcome(f[5], line_no, "b_outcome");

    if (f[1] == kCommonBlock) {
      if (!separate.empty()) fail(line_no, "common-space row in a separate-space log");
      Partial& p = common[trial];
      if (p.first_line == 0) p.first_line = line_no;
      auto& slot = p.rows[block_index(pair)];
      if (slot) fail(line_no, "duplicate " + std::string(to_string(pair)) + " row for trial " + std::to_string(trial));
      slot = std::make_pair(a, b);
    } else {
      std::size_t block = 4;
      for (std::size_t k = 0; k < 4; ++k)
        if (f[1] == kSeparateBlocks[k]) block = k;
      if (block == 4) fail(line_no, "unknown block '" + std::string(f[1]) + "'");
      if (block != block_index(pair)) fail(line_no, "block " + std::string(f[1]) + " does not hold pair " + std::string(f[2]));
      if (!common.empty()) fail(line_no, "separate-space row in a common-space log");
      separate.push_back(TrialRecord{trial, pair, time, a, b});
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::parse, "trial log has no data rows");
  if (!separate.empty()) return separate;

  std::vector<QuadrupleRecord> quads;
  quads.reserve(common.size());
  for (const auto& [trial, p] : common) {
    for (const auto& r : p.rows)
      if (!r) fail(p.first_line, "common-space trial " + std::to_string(trial) + " lacks one of AB, AC, DB, DC");
    const auto [a_ab, b_ab] = *p.rows[0];
    const auto [a_ac, b_ac] = *p.rows[1];
    const auto [a_db, b_db] = *p.rows[2];
    const auto [a_dc, b_dc] = *p.rows[3];
    if (a_ab != a_ac || a_db != a_dc || b_ab != b_db || b_ac != b_dc)
      fail(p.first_line, "common-space trial " + std::to_string(trial) + " reports conflicting outcomes for one setting");
    quads.push_back(QuadrupleRecord::from_outcomes(trial, a_ab, a_db, b_ab, b_ac));
  }
  return quads;
}

TrialData read_trial_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open trial log " + path.string());
  return read_trial_log(in);
}

}  // namespace bellkit

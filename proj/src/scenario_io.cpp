#include "bellkit/scenario_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bellkit/error.hpp"

namespace bellkit {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::parse, "scenario line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view token, std::size_t line) {
  const auto slash = token.find('/');
  auto parse_double = [&](std::string_view t) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
      fail(line, "'" + std::string(token) + "' is not a number");
    return v;
  };
  if (slash == std::string_view::npos) return parse_double(token);
  const double num = parse_double(token.substr(0, slash));
  const double den = parse_double(token.substr(slash + 1));
  if (den == 0.0) fail(line, "zero denominator in '" + std::string(token) + "'");
  return num / den;
}

std::vector<std::string> words(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

}  // namespace

MarginalScenario parse_scenario(std::istream& in) {
  MarginalScenario s;
  bool have_variables = false;
  std::vector<std::size_t> opened_at;
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto colon = raw.find(':');
    std::string keyword;
    if (colon != std::string::npos) {
      const auto head = words(raw.substr(0, colon));
      if (head.size() != 1) fail(line_no, "malformed keyword");
      keyword = head.front();
    }

    if (keyword == "variables") {
      if (have_variables) fail(line_no, "variables declared twice");
      s.variables = words(raw.substr(colon + 1));
      if (s.variables.empty()) fail(line_no, "empty variable list");
      have_variables = true;
    } else if (keyword == "constraint") {
      if (!have_variables) fail(line_no, "constraint before variables");
      MarginalConstraint c;
      c.variables = words(raw.substr(colon + 1));
      if (c.variables.empty()) fail(line_no, "constraint without variables");
      s.constraints.push_back(std::move(c));
      opened_at.push_back(line_no);
    } else if (!keyword.empty()) {
      fail(line_no, "unknown keyword '" + keyword + "'");
    } else {
      const auto tokens = words(raw);
      if (tokens.empty()) continue;
      if (s.constraints.empty()) fail(line_no, "numbers outside a constraint block");
      for (const auto& t : tokens) s.constraints.back().table.push_back(parse_number(t, line_no));
    }
  }

  if (!have_variables) fail(line_no, "missing variables declaration");
  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    const auto& c = s.constraints[i];
    const std::size_t expected = c.variables.size() < 63 ? std::size_t{1} << c.variables.size() : 0;
    if (c.table.size() != expected)
      fail(opened_at[i], "constraint has " + std::to_string(c.table.size()) + " entries, expected " +
                             std::to_string(expected));
  }
  return s;
}

MarginalScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open scenario file " + path.string());
  return parse_scenario(in);
}

void write_scenario(std::ostream& out, const MarginalScenario& s) {
  out << "variables:";
  for (const auto& v : s.variables) out << ' ' << v;
  out << '\n';
  char buf[32];
  for (const auto& c : s.constraints) {
    out << "constraint:";
    for (const auto& v : c.variables) out << ' ' << v;
    out << "\n ";
    for (double p : c.table) {
      std::snprintf(buf, sizeof buf, "%.17g", p);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

}  // namespace bellkit

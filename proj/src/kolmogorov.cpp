#include "bellkit/kolmogorov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "bellkit/error.hpp"

namespace bellkit {

namespace {

std::string format_times(const std::vector<std::uint64_t>& times) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < times.size(); ++i) os << (i ? "," : "") << times[i];
  os << ')';
  return os.str();
}

// Value of the block belonging to time position `pos` in a k-position cell index.
std::uint64_t block_of(std::uint64_t cell, std::size_t pos, std::size_t k, int d) {
  const std::uint64_t shift = static_cast<std::uint64_t>(k - 1 - pos) * static_cast<std::uint64_t>(d);
  return (cell >> shift) & ((std::uint64_t{1} << d) - 1);
}

void validate(const ProcessFamily& family) {
  const int d = family.dimension;
  if (d < 1 || d > 4) throw Error(ErrorCode::invalid_argument, "process dimension must be 1..4");
  const std::set<std::uint64_t> declared(family.times.begin(), family.times.end());
  for (const TimedTable& t : family.tables) {
    if (t.times.empty()) throw Error(ErrorCode::invalid_argument, "table without time arguments");
    if (t.times.size() * static_cast<std::size_t>(d) > 24)
      throw Error(ErrorCode::invalid_argument, "table " + format_times(t.times) + " is too large");
    const std::set<std::uint64_t> distinct(t.times.begin(), t.times.end());
    if (distinct.size() != t.times.size())
      throw Error(ErrorCode::invalid_argument, "table " + format_times(t.times) + " repeats a time");
    for (std::uint64_t time : t.times)
      if (!declared.empty() && !declared.contains(time))
        throw Error(ErrorCode::invalid_argument, "time " + std::to_string(time) + " is not declared");
    const std::size_t cells = std::size_t{1} << (t.times.size() * static_cast<std::size_t>(d));
    if (t.probabilities.size() != cells)
      throw Error(ErrorCode::invalid_argument, "table " + format_times(t.times) + " has " +
                                                   std::to_string(t.probabilities.size()) + " cells, expected " +
                                                   std::to_string(cells));
    for (double p : t.probabilities)
      if (!std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "non-finite probability");
  }
}

}  // namespace

const char* to_string(KolmogorovCondition condition) noexcept {
  switch (condition) {
    case KolmogorovCondition::normalization: return "normalization";
    case KolmogorovCondition::non_negativity: return "non-negativity";
    case KolmogorovCondition::marginalization: return "marginalization";
    case KolmogorovCondition::permutation_symmetry: return "permutation-symmetry";
  }
  return "unknown";
}

std::string KolmogorovReport::reason() const {
  return violations.empty() ? "consistent" : to_string(violations.front().condition);
}

KolmogorovReport check_kolmogorov(const ProcessFamily& family) {
  validate(family);
  const int d = family.dimension;
  KolmogorovReport report;
  auto flag = [&](KolmogorovCondition c, std::string detail) {
    report.consistent = false;
    report.violations.push_back({c, std::move(detail)});
  };

  std::map<std::vector<std::uint64_t>, const TimedTable*> by_times;
  for (const TimedTable& t : family.tables) by_times[t.times] = &t;

  for (const TimedTable& t : family.tables) {
    double sum = 0.0;
    for (double p : t.probabilities) sum += p;
    if (std::abs(sum - 1.0) > kKolmogorovTolerance) {
      std::ostringstream os;
      os << "table " << format_times(t.times) << " sums to " << sum << ", not 1";
      flag(KolmogorovCondition::normalization, os.str());
    }
    const auto neg = std::find_if(t.probabilities.begin(), t.probabilities.end(), [](double p) { return p < 0.0; });
    if (neg != t.probabilities.end()) {
      std::ostringstream os;
      os << "table " << format_times(t.times) << " cell " << (neg - t.probabilities.begin()) << " is " << *neg;
      flag(KolmogorovCondition::non_negativity, os.str());
    }
  }

  // Summing out one time must reproduce the table over the remaining times.
  for (const TimedTable& t : family.tables) {
    const std::size_t k = t.times.size();
    if (k < 2) continue;
    for (std::size_t pos = 0; pos < k; ++pos) {
      std::vector<std::uint64_t> rest = t.times;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
      const auto it = by_times.find(rest);
      if (it == by_times.end()) continue;

      std::vector<double> marginal(it->second->probabilities.size(), 0.0);
      for (std::uint64_t cell = 0; cell < t.probabilities.size(); ++cell) {
        std::uint64_t reduced = 0;
        for (std::size_t q = 0; q < k; ++q) {
          if (q == pos) continue;
          reduced = (reduced << d) | block_of(cell, q, k, d);
        }
        marginal[reduced] += t.probabilities[cell];
      }
      double worst = 0.0;
      for (std::size_t c = 0; c < marginal.size(); ++c)
        worst = std::max(worst, std::abs(marginal[c] - it->second->probabilities[c]));
      if (worst > kKolmogorovTolerance) {
        std::ostringstream os;
        os << "summing " << format_times(t.times) << " over time " << t.times[pos] << " differs from "
           << format_times(rest) << " by " << worst;
        flag(KolmogorovCondition::marginalization, os.str());
      }
    }
  }

  // Reordering the time arguments together with their blocks changes nothing.
  for (std::size_t i = 0; i < family.tables.size(); ++i) {
    for (std::size_t j = i + 1; j < family.tables.size(); ++j) {
      const TimedTable& x = family.tables[i];
      const TimedTable& y = family.tables[j];
      if (x.times.size() != y.times.size() || x.times == y.times) continue;
      if (!std::is_permutation(x.times.begin(), x.times.end(), y.times.begin())) continue;
      const std::size_t k = x.times.size();
      std::vector<std::size_t> where(k);  // position in y of x's q-th time
      for (std::size_t q = 0; q < k; ++q)
        where[q] = static_cast<std::size_t>(std::find(y.times.begin(), y.times.end(), x.times[q]) - y.times.begin());
      double worst = 0.0;
      for (std::uint64_t cell = 0; cell < x.probabilities.size(); ++cell) {
        std::uint64_t mapped = 0;
        for (std::size_t q = 0; q < k; ++q) {
          const std::uint64_t shift = static_cast<std::uint64_t>(k - 1 - where[q]) * static_cast<std::uint64_t>(d);
          mapped |= block_of(cell, q, k, d) << shift;
        }
        worst = std::max(worst, std::abs(x.probabilities[cell] - y.probabilities[mapped]));
      }
      if (worst > kKolmogorovTolerance) {
        std::ostringstream os;
        os << "tables " << format_times(x.times) << " and " << format_times(y.times)
           << " disagree after reordering by " << worst;
        flag(KolmogorovCondition::permutation_symmetry, os.str());
      }
    }
  }
  return report;
}

ProcessFamily iid_family(int dimension, const std::vector<double>& single,
                         const std::vector<std::uint64_t>& times, int max_order) {
  if (dimension < 1 || dimension > 4 || single.size() != (std::size_t{1} << dimension))
    throw Error(ErrorCode::invalid_argument, "single-time table does not match the dimension");
  ProcessFamily family;
  family.dimension = dimension;
  family.times = times;

  std::vector<std::uint64_t> tuple;
  std::vector<bool> used(times.size(), false);
  auto emit = [&] {
    const std::size_t k = tuple.size();
    std::vector<double> probs(std::size_t{1} << (k * static_cast<std::size_t>(dimension)));
    for (std::uint64_t cell = 0; cell < probs.size(); ++cell) {
      double p = 1.0;
      for (std::size_t q = 0; q < k; ++q) p *= single[block_of(cell, q, k, dimension)];
      probs[cell] = p;
    }
    family.tables.push_back({tuple, std::move(probs)});
  };
  auto recurse = [&](auto&& self) -> void {
    if (!tuple.empty()) emit();
    if (static_cast<int>(tuple.size()) == max_order) return;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      tuple.push_back(times[i]);
      self(self);
      tuple.pop_back();
      used[i] = false;
    }
  };
  recurse(recurse);
  return family;
}

}  // namespace bellkit

#include <doctest.h>

#include <cmath>
#include <random>

#include "bellkit/consistency.hpp"
#include "bellkit/error.hpp"
#include "bellkit/kolmogorov.hpp"
#include "oracles.hpp"

using namespace bellkit;

namespace {

Cyclicity cyc(const std::vector<std::vector<std::string>>& sets, const std::vector<std::string>& vars) {
  return vorobev_cyclicity(sets, vars);
}

void check_witness(const MarginalScenario& s, const FeasibilityResult& r, double tol) {
  REQUIRE(r.witness.has_value());
  const auto& w = *r.witness;
  REQUIRE(w.size() == (std::size_t{1} << s.variables.size()));
  double total = 0;
  for (double p : w) {
    CHECK(p >= -1e-12);
    total += p;
  }
  CHECK(std::abs(total - 1) < 1e-9);
  for (const auto& c : s.constraints) {
    std::vector<std::size_t> idx;
    for (const auto& v : c.variables) idx.push_back(s.index_of(v));
    const auto m = oracle::marginal(w, s.variables.size(), idx);
    for (std::size_t k = 0; k < m.size(); ++k) CHECK(std::abs(m[k] - c.table[k]) <= tol);
  }
}

}  // namespace

TEST_CASE("Kolmogorov conditions") {
  const std::vector<double> single{0.1, 0.2, 0.3, 0.4};
  SUBCASE("i.i.d. families are consistent") {
    const auto fam = iid_family(2, single, {0, 1, 2}, 3);
    CHECK(fam.tables.size() == 3 + 6 + 6);
    const auto r = check_kolmogorov(fam);
    CHECK(r.consistent);
    CHECK(r.reason() == "consistent");
  }
  SUBCASE("each condition is detected") {
    auto fam = iid_family(1, {0.25, 0.75}, {0, 1}, 2);
    SUBCASE("normalization") {
      for (auto& p : fam.tables[0].probabilities) p *= 0.5;
      CHECK(check_kolmogorov(fam).reason() == "normalization");
    }
    SUBCASE("non-negativity") {
      // (0, 1) table: shift mass so totals and marginals stay intact but a cell goes negative.
      for (auto& t : fam.tables)
        if (t.times.size() == 1 && t.times[0] == 0) t.probabilities = {-0.25, 1.25};
      CHECK(check_kolmogorov(fam).reason() == "non-negativity");
    }
    SUBCASE("marginalization") {
      for (auto& t : fam.tables)
        if (t.times == std::vector<std::uint64_t>{0, 1}) t.probabilities = {0.5, 0.0, 0.0, 0.5};
      const auto r = check_kolmogorov(fam);
      CHECK_FALSE(r.consistent);
      CHECK(r.reason() == "marginalization");
    }
    SUBCASE("permutation symmetry") {
      // Asymmetric joint with equal one-time marginals so only the reordering check fails.
      for (auto& t : fam.tables) {
        if (t.times == std::vector<std::uint64_t>{0, 1}) t.probabilities = {0.0, 0.25, 0.25, 0.5};
        if (t.times == std::vector<std::uint64_t>{1, 0}) t.probabilities = {0.05, 0.2, 0.2, 0.55};
      }
      const auto r = check_kolmogorov(fam);
      CHECK_FALSE(r.consistent);
      bool found = false;
      for (const auto& v : r.violations) found |= v.condition == KolmogorovCondition::permutation_symmetry;
      CHECK(found);
    }
  }
  SUBCASE("malformed families throw") {
    ProcessFamily bad{2, {0}, {TimedTable{{0}, {0.5, 0.5}}}};
    CHECK_THROWS_AS(check_kolmogorov(bad), Error);
  }
  CHECK(std::string(to_string(KolmogorovCondition::permutation_symmetry)) == "permutation-symmetry");
}

TEST_CASE("scenario validation") {
  auto s = oracle::chsh_scenario(0.5, 0.5, 0.5, -0.5);
  CHECK_NOTHROW(validate_scenario(s));
  SUBCASE("normalization") {
    s.constraints[1].table = {0.2, 0.2, 0.2, 0.3};
    CHECK_THROWS_AS(validate_scenario(s), Error);
  }
  SUBCASE("overlap disagreement names both constraints") {
    s.constraints[1].table = {0.5, 0.2, 0.1, 0.2};  // Aa marginal 0.7 / 0.3 against 0.5 / 0.5
    try {
      validate_scenario(s);
      FAIL("disagreeing marginals accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::precondition);
      const std::string what = e.what();
      CHECK(what.find("Aa") != std::string::npos);
    }
  }
  SUBCASE("unknown variable") {
    s.constraints[0].variables[0] = "Zz";
    CHECK_THROWS_AS(validate_scenario(s), Error);
  }
  SUBCASE("size limit") {
    MarginalScenario big;
    big.variables = oracle::names(kMaxFeasibilityVariables + 1);
    big.constraints = {{{big.variables[0]}, {0.5, 0.5}}};
    try {
      joint_feasibility(big);
      FAIL("oversized scenario accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::size_limit);
    }
  }
}

TEST_CASE("quantum CHSH tables are infeasible with a 2 sqrt 2 certificate") {
  const double r = std::sqrt(0.5);
  const auto s = oracle::chsh_scenario(r, r, r, -r);
  const auto lp = joint_feasibility(s);
  CHECK_FALSE(lp.feasible);
  REQUIRE(lp.certificate.has_value());
  CHECK(lp.certificate->kind == "chsh");
  CHECK(lp.certificate->value == doctest::Approx(oracle::kTsirelson).epsilon(1e-12));
  CHECK(lp.certificate->bound == doctest::Approx(2.0));
  CHECK(certificate_value(*lp.certificate, s) == doctest::Approx(lp.certificate->value));
  const auto vo = deterministic_vertex_oracle(s);
  CHECK_FALSE(vo.feasible);
  REQUIRE(vo.certificate.has_value());
  CHECK(vo.certificate->value > vo.certificate->bound);
}

TEST_CASE("three perfectly constrained pairs are infeasible") {
  // Enumerate the 8 sign assignments: none satisfies Aa=Ab, Aa=Ac, Ab=-Ac.
  int satisfying = 0;
  for (int bits = 0; bits < 8; ++bits) {
    const int a = bits & 1 ? 1 : -1, b = bits & 2 ? 1 : -1, c = bits & 4 ? 1 : -1;
    satisfying += (a * b == 1 && a * c == 1 && b * c == -1);
  }
  REQUIRE(satisfying == 0);
  MarginalScenario s;
  s.variables = {"Aa", "Ab", "Ac"};
  s.constraints = {{{"Aa", "Ab"}, oracle::correlated_table(1)},
                   {{"Aa", "Ac"}, oracle::correlated_table(1)},
                   {{"Ab", "Ac"}, oracle::correlated_table(-1)}};
  const auto lp = joint_feasibility(s);
  CHECK_FALSE(lp.feasible);
  REQUIRE(lp.certificate.has_value());
  CHECK(certificate_value(*lp.certificate, s) > lp.certificate->bound + 1e-6);
  CHECK_FALSE(deterministic_vertex_oracle(s).feasible);
  CHECK(vorobev_cyclicity(s) == Cyclicity::cyclic);
}

TEST_CASE("local CHSH correlations at the boundary are feasible") {
  const auto s = oracle::chsh_scenario(0.5, 0.5, 0.5, -0.5);  // facet value exactly 2
  const auto lp = joint_feasibility(s);
  CHECK(lp.feasible);
  check_witness(s, lp, 1e-7);
  CHECK(deterministic_vertex_oracle(s).feasible);
}

TEST_CASE("marginals of random joints are feasible and both solvers agree") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 3 + rep % 4;
    const auto joint = oracle::random_joint(n, rng, rep % 3 == 0 ? 0.6 : 0.0);
    std::vector<std::vector<std::size_t>> subsets;
    for (std::size_t i = 0; i < n; ++i) subsets.push_back({i, (i + 1) % n});
    if (n > 3) subsets.push_back({0, 1, 2});
    const auto s = oracle::scenario_from_joint(joint, n, subsets);
    const auto lp = joint_feasibility(s);
    CHECK(lp.feasible);
    CHECK(lp.residual <= kFeasibilityTolerance);
    check_witness(s, lp, 1e-7);
    const auto vo = deterministic_vertex_oracle(s);
    CHECK(vo.feasible);
    check_witness(s, vo, 1e-7);
  }
}

TEST_CASE("marginalize matches the reference") {
  std::mt19937_64 rng(3);
  const auto joint = oracle::random_joint(4, rng);
  MarginalScenario s;
  s.variables = oracle::names(4);
  const auto m = marginalize(s, joint, {"X3", "X1"});
  const auto ref = oracle::marginal(joint, 4, {3, 1});
  REQUIRE(m.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(m[k] == doctest::Approx(ref[k]).epsilon(1e-14));
}

TEST_CASE("vertex oracle size limit") {
  MarginalScenario s;
  s.variables = oracle::names(kMaxOracleVariables + 1);
  s.constraints = {{{s.variables[0]}, {0.5, 0.5}}};
  CHECK_THROWS_AS(deterministic_vertex_oracle(s), Error);
}

TEST_CASE("Graham reduction") {
  const std::vector<std::string> v{"Aa", "Ad", "Bb", "Bc"};
  CHECK(cyc({{"Aa", "Bb"}, {"Aa", "Bc"}, {"Ad", "Bb"}, {"Ad", "Bc"}}, v) == Cyclicity::cyclic);
  CHECK(cyc({{"Aa", "Bb"}, {"Bb", "Ad"}, {"Ad", "Bc"}}, v) == Cyclicity::acyclic);
  CHECK(cyc({{"Aa", "Bb"}}, v) == Cyclicity::acyclic);
  CHECK(cyc({{"Aa", "Bb"}, {"Bb", "Ad"}, {"Aa", "Ad"}}, v) == Cyclicity::cyclic);
  // A triangle covered by a larger set reduces away.
  CHECK(cyc({{"Aa", "Bb"}, {"Bb", "Ad"}, {"Aa", "Ad"}, {"Aa", "Bb", "Ad"}}, v) == Cyclicity::acyclic);
  CHECK(cyc({{"Aa", "Bb", "Bc"}, {"Bb", "Bc", "Ad"}}, v) == Cyclicity::acyclic);
  CHECK_THROWS_AS(cyc({{"Aa", "Zz"}}, v), Error);
  CHECK_THROWS_AS(cyc({}, v), Error);
  CHECK(std::string(to_string(Cyclicity::cyclic)) == "cyclic");
}

TEST_CASE("CHSH tables at facet value 2 + epsilon") {
  // Just past the local bound, both solvers must call it infeasible.
  const double e = 0.5 + 1e-4;
  const auto s = oracle::chsh_scenario(e, e, e, -e);
  CHECK_FALSE(joint_feasibility(s).feasible);
  CHECK_FALSE(deterministic_vertex_oracle(s).feasible);
}

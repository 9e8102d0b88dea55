#include <doctest.h>

#include <random>

#include "bellkit/consistency.hpp"
#include "bellkit/quantum.hpp"
#include "oracles.hpp"

using namespace bellkit;

namespace {
SettingVector random_setting(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = std::acos(2 * u(rng) - 1) * 180.0 / oracle::kPi;
  return make_setting(theta, 360.0 * u(rng));
}
}  // namespace

TEST_CASE("optimal CHSH angles give the frozen table entries") {
  const auto t = quantum::joint_pair_distribution(make_setting(0), make_setting(45)).flattened();
  CHECK(t[0] == doctest::Approx(oracle::kCos45Plus).epsilon(1e-15));
  CHECK(t[1] == doctest::Approx(oracle::kCos45Minus).epsilon(1e-14));
  CHECK(t[2] == doctest::Approx(oracle::kCos45Minus).epsilon(1e-14));
  CHECK(t[3] == doctest::Approx(oracle::kCos45Plus).epsilon(1e-15));
}

TEST_CASE("pair tables are normalized with unbiased marginals") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const SettingVector a = random_setting(rng), b = random_setting(rng);
    const auto d = quantum::joint_pair_distribution(a, b);
    double total = 0;
    for (const auto& row : d.cell)
      for (double p : row) {
        CHECK(p >= 0.0);
        total += p;
      }
    CHECK(std::abs(total - 1) < 1e-12);
    CHECK(std::abs(d.first_mean()) < 1e-12);
    CHECK(std::abs(d.second_mean()) < 1e-12);
    CHECK(std::abs(d.product_expectation() - dot(a, b)) < 1e-12);
    CHECK(d.probability(Outcome::plus(), Outcome::minus()) == d.cell[1][0]);
  }
}

TEST_CASE("same setting gives perfect correlation, opposite settings perfect anticorrelation") {
  const auto same = quantum::joint_pair_distribution(make_setting(33), make_setting(33)).flattened();
  CHECK(same[0] == doctest::Approx(0.5));
  CHECK(same[1] == doctest::Approx(0.0));
  const auto flip = quantum::joint_pair_distribution(make_setting(33), make_setting(213)).flattened();
  CHECK(flip[1] == doctest::Approx(0.5));
  CHECK(flip[3] == doctest::Approx(0.0));
}

TEST_CASE("tensor-product expectation agrees with an independent Pauli computation") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const SettingVector a = random_setting(rng), b = random_setting(rng);
    const double lib = quantum::singlet_tensor_expectation(a, b);
    const double ref = oracle::singlet_correlation({a.x(), a.y(), a.z()}, {b.x(), b.y(), b.z()});
    CHECK(std::abs(lib - ref) < 1e-12);
    CHECK(std::abs(lib + dot(a, b)) < 1e-9);
    CHECK(quantum::pair_expectation_AA(a, b) == doctest::Approx(dot(a, b)));
    CHECK(quantum::pair_expectation_AB(a, b) == doctest::Approx(-dot(a, b)));
  }
}

TEST_CASE("facet value at the optimal angles reaches 2 sqrt 2") {
  const SettingVector a = make_setting(0), b = make_setting(45), c = make_setting(-45), d = make_setting(90);
  using quantum::pair_expectation_AA;
  const double f = chsh_facet_value(pair_expectation_AA(a, b), pair_expectation_AA(a, c),
                                    pair_expectation_AA(d, b), pair_expectation_AA(d, c));
  CHECK(f == doctest::Approx(oracle::kTsirelson).epsilon(1e-15));
  CHECK(oracle::max_local_chsh() == 2.0);
  CHECK(chsh_facet_value(1, 1, 1, 1) == 2.0);
  CHECK(chsh_facet_value(0, 0, 0, 0) == 0.0);
}

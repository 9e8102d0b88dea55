#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "bellkit/bellkit.h"

namespace {

struct Settings4 {
  bk_vec3 v[4];
  Settings4(double a, double b, double c, double d) {
    const double angles[4] = {a, b, c, d};
    for (int i = 0; i < 4; ++i) REQUIRE(bk_make_setting(angles[i], 0, &v[i]) == BK_OK);
  }
};

const char* kQuantumChsh =
    "variables: Aa Ad Bb Bc\n"
    "constraint: Aa Bb\n0.42677669529663687 0.0732233047033631 0.0732233047033631 0.42677669529663687\n"
    "constraint: Aa Bc\n0.42677669529663687 0.0732233047033631 0.0732233047033631 0.42677669529663687\n"
    "constraint: Ad Bb\n0.42677669529663687 0.0732233047033631 0.0732233047033631 0.42677669529663687\n"
    "constraint: Ad Bc\n0.0732233047033631 0.42677669529663687 0.42677669529663687 0.0732233047033631\n";

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(bk_status_name(BK_OK)) == "ok");
  CHECK(std::string(bk_status_name(BK_E_IO)) == "I/O error");
  CHECK(std::strlen(bk_version()) > 0);
  bk_vec3 v;
  CHECK(bk_make_setting(10, 0, nullptr) == BK_E_INVALID_ARGUMENT);
  CHECK(std::string(bk_last_error()).find("null") != std::string::npos);
  CHECK(bk_make_setting(10, 0, &v) == BK_OK);
  CHECK(std::string(bk_last_error()).empty());
  bk_vec3 bad{1, 1, 0};
  bk_pair_table t;
  CHECK(bk_joint_pair_distribution(&bad, &v, &t) == BK_E_INVALID_ARGUMENT);
}

TEST_CASE("quantum predictions through the C interface") {
  Settings4 s(0, 45, -45, 90);
  bk_pair_table t;
  REQUIRE(bk_joint_pair_distribution(&s.v[0], &s.v[1], &t) == BK_OK);
  CHECK(t.p[0] == doctest::Approx(0.42677669529663687));
  CHECK(t.expectation == doctest::Approx(std::sqrt(0.5)));
  double e = 0;
  REQUIRE(bk_singlet_tensor_expectation(&s.v[0], &s.v[1], &e) == BK_OK);
  CHECK(e == doctest::Approx(-std::sqrt(0.5)));
  CHECK(bk_chsh_facet_value(1, 1, 1, -1) == 4.0);
}

TEST_CASE("plans, simulation and log round-trip") {
  Settings4 s(0, 45, -45, 90);
  bk_plan* plan = nullptr;
  CHECK(bk_plan_create(s.v, 0, 1, BK_MODE_PER_PAIR, &plan) == BK_E_INVALID_PLAN);
  CHECK(plan == nullptr);
  CHECK(bk_plan_create(s.v, 10, 1, static_cast<bk_mode>(9), &plan) == BK_E_INVALID_ARGUMENT);
  REQUIRE(bk_plan_create(s.v, 2000, 1, BK_MODE_PER_PAIR, &plan) == BK_OK);

  bk_dataset* data = nullptr;
  REQUIRE(bk_simulate(plan, 2, &data) == BK_OK);
  CHECK(bk_dataset_is_common_space(data) == 0);
  CHECK(bk_dataset_trials_per_pair(data) == 2000);

  bk_gamma_summary g;
  REQUIRE(bk_dataset_gamma(data, &g) == BK_OK);
  CHECK(g.J == 2000);
  CHECK(g.O + g.P + g.Q + g.R + g.S == g.J);
  CHECK(g.r_bound_pass == 1);
  CHECK(g.M == doctest::Approx(static_cast<double>(g.gamma_sum) / g.J));

  bk_pair_summary ps;
  REQUIRE(bk_dataset_pair_summary(data, BK_PAIR_DC, &ps) == BK_OK);
  CHECK(ps.count == 2000);
  CHECK(ps.cells[0] + ps.cells[1] + ps.cells[2] + ps.cells[3] == 2000);
  CHECK(bk_dataset_pair_summary(data, static_cast<bk_pair>(4), &ps) == BK_E_INVALID_ARGUMENT);

  std::vector<double> running(2000);
  std::size_t written = 0;
  REQUIRE(bk_dataset_running_mean(data, running.data(), running.size(), &written) == BK_OK);
  CHECK(written == 2000);
  CHECK(running.back() == doctest::Approx(g.M));

  const auto path = (std::filesystem::temp_directory_path() / "bellkit_capi_log.csv").string();
  REQUIRE(bk_dataset_write_log(data, path.c_str()) == BK_OK);
  bk_dataset* back = nullptr;
  REQUIRE(bk_dataset_read_log(path.c_str(), &back) == BK_OK);
  bk_gamma_summary g2;
  REQUIRE(bk_dataset_gamma(back, &g2) == BK_OK);
  CHECK(g2.gamma_sum == g.gamma_sum);
  CHECK(g2.R == g.R);
  std::filesystem::remove(path);

  CHECK(bk_dataset_write_log(data, "/nonexistent/dir/log.csv") == BK_E_IO);
  bk_dataset* missing = nullptr;
  CHECK(bk_dataset_read_log("/nonexistent/dir/log.csv", &missing) == BK_E_IO);

  bk_dataset_destroy(back);
  bk_dataset_destroy(data);
  bk_plan_destroy(plan);
}

TEST_CASE("common-space datasets") {
  Settings4 s(0, 45, -45, 90);
  bk_plan* plan = nullptr;
  REQUIRE(bk_plan_create(s.v, 5000, 3, BK_MODE_COMMON_SPACE, &plan) == BK_OK);
  bk_dataset* data = nullptr;
  REQUIRE(bk_simulate(plan, 1, &data) == BK_OK);
  CHECK(bk_dataset_is_common_space(data) == 1);
  bk_gamma_summary g;
  REQUIRE(bk_dataset_gamma(data, &g) == BK_OK);
  CHECK(g.M <= 2.0);
  CHECK(g.O + g.R + g.S == 0);
  bk_dataset_destroy(data);
  bk_plan_destroy(plan);
}

TEST_CASE("scenario handles") {
  bk_scenario* s = nullptr;
  REQUIRE(bk_scenario_parse(kQuantumChsh, &s) == BK_OK);
  CHECK(bk_scenario_variable_count(s) == 4);
  CHECK(std::string(bk_scenario_variable_name(s, 2)) == "Bb");
  CHECK(bk_scenario_variable_name(s, 9) == nullptr);
  CHECK(bk_scenario_constraint_count(s) == 4);
  CHECK(bk_scenario_validate(s) == BK_OK);
  int cyclic = -1;
  REQUIRE(bk_scenario_cyclicity(s, &cyclic) == BK_OK);
  CHECK(cyclic == 1);

  bk_feasibility* f = nullptr;
  REQUIRE(bk_scenario_feasibility(s, &f) == BK_OK);
  CHECK(bk_feasibility_is_feasible(f) == 0);
  std::size_t size = 7;
  CHECK(bk_feasibility_witness(f, &size) == nullptr);
  CHECK(size == 0);
  bk_certificate_info info;
  REQUIRE(bk_feasibility_certificate(f, &info) == BK_OK);
  CHECK(std::string(info.kind) == "chsh");
  CHECK(info.value == doctest::Approx(2.8284271247461903));
  CHECK(info.bound == doctest::Approx(2.0));
  REQUIRE(info.term_count > 0);
  bk_certificate_term term;
  CHECK(bk_feasibility_certificate_term(f, 0, &term) == BK_OK);
  CHECK(bk_feasibility_certificate_term(f, info.term_count, &term) == BK_E_INVALID_ARGUMENT);

  bk_feasibility* o = nullptr;
  REQUIRE(bk_scenario_vertex_oracle(s, &o) == BK_OK);
  CHECK(bk_feasibility_is_feasible(o) == 0);
  bk_feasibility_destroy(o);
  bk_feasibility_destroy(f);
  bk_scenario_destroy(s);

  CHECK(bk_scenario_parse("variables: X\nconstraint: X\n0.5 oops\n", &s) == BK_E_PARSE);
  CHECK(s == nullptr);
  REQUIRE(bk_scenario_parse("variables: X Y\nconstraint: X\n0.5 0.5\nconstraint: X Y\n0.4 0.4 0.1 0.1\n", &s) == BK_OK);
  CHECK(bk_scenario_validate(s) == BK_E_PRECONDITION);
  bk_scenario_destroy(s);
}

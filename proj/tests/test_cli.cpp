#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace bellkit::cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("bellkit_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config_text(const std::string& mode, std::uint64_t trials, const TempDir& dir) {
  return "mode = " + mode +
         "\nangle_a = 0\nangle_b = 45\nangle_c = -45\nangle_d = 90\ntrials = " + std::to_string(trials) +
         "\nseed = 7\nlog = " + dir.file("trials.csv") + "\nreport = " + dir.file("report.json") + "\n";
}

const char* kChain =
    "variables: Aa Bb Ad Bc\n"
    "constraint: Aa Bb\n0.3 0.2 0.2 0.3\n"
    "constraint: Bb Ad\n0.25 0.25 0.25 0.25\n"
    "constraint: Ad Bc\n0.1 0.4 0.4 0.1\n";

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\nmode = instrument\nangle_a = 0\nangle_b = 45.5\nangle_c = -45\nangle_d = 90  # trailing\n"
      "azimuth_b = 30\ntrials = 12\nseed = 18446744073709551615\nthreads = 2\nlog = a.csv\nreport = r.json\n"
      "series = s.csv\n");
  const RunConfig cfg = parse_config(in);
  CHECK(cfg.mode == "instrument");
  CHECK(cfg.angles[1].theta_deg == 45.5);
  CHECK(cfg.angles[1].phi_deg == 30);
  CHECK(cfg.seed == 18446744073709551615ull);
  CHECK(cfg.threads == 2);
  std::istringstream again(format_config(cfg));
  CHECK(parse_config(again) == cfg);

  auto fails = [](const std::string& text) {
    std::istringstream s(text);
    CHECK_THROWS_AS(parse_config(s), std::runtime_error);
  };
  const std::string base = "mode = per-pair\nangle_a = 0\nangle_b = 45\nangle_c = -45\nangle_d = 90\nseed = 1\n";
  fails(base);                                  // trials missing
  fails(base + "trials = 10\ncolour = red\n");  // unknown key
  fails(base + "trials = 10\ntrials = 11\n");   // duplicate
  fails(base + "trials = -3\n");
  fails(base + "trials = 10\nthreads\n");
}

TEST_CASE("simulate then audit") {
  TempDir dir;
  const std::string cfg = dir.file("run.cfg");
  write(cfg, config_text("per-pair", 5000, dir));
  const auto sim = invoke({"simulate", "--config", cfg, "--series", dir.file("series.csv")});
  REQUIRE(sim.code == kExitOk);
  const auto report = nlohmann::json::parse(slurp(dir.file("report.json")));
  CHECK(report["config"]["seed_source"] == "config");
  CHECK(report["gamma"]["J"] == 5000);
  const auto& g = report["gamma"];
  CHECK(g["O"].get<int>() + g["P"].get<int>() + g["Q"].get<int>() + g["R"].get<int>() + g["S"].get<int>() == 5000);
  for (const auto& p : report["pairs"]) CHECK(p["count"] == 5000);
  CHECK(report["prediction"]["chsh_value"].get<double>() == doctest::Approx(2.8284271247461903));
  CHECK(report["r_bound"]["pass"] == true);

  const std::string series = slurp(dir.file("series.csv"));
  CHECK(series.rfind("quadruple,running_M\n1,", 0) == 0);
  CHECK(std::count(series.begin(), series.end(), '\n') == 5001);

  const auto audit = invoke({"audit", dir.file("trials.csv"), "--report", dir.file("audit.json")});
  REQUIRE(audit.code == kExitOk);
  const auto a = nlohmann::json::parse(slurp(dir.file("audit.json")));
  CHECK(a["gamma"] == report["gamma"]);
  CHECK(a["r_bound"] == report["r_bound"]);

  const auto to_stdout = invoke({"audit", dir.file("trials.csv")});
  CHECK(to_stdout.code == kExitOk);
  CHECK(nlohmann::json::parse(to_stdout.out)["gamma"] == report["gamma"]);
}

TEST_CASE("common-space simulation report") {
  TempDir dir;
  write(dir.file("run.cfg"), config_text("common-space", 4000, dir));
  REQUIRE(invoke({"simulate", dir.file("run.cfg")}).code == kExitOk);
  const auto report = nlohmann::json::parse(slurp(dir.file("report.json")));
  CHECK(report["space"] == "common");
  CHECK(report["gamma"]["M"].get<double>() <= 2.0);
  CHECK(report["gamma"]["R"] == 0);
  CHECK(report["gamma"]["O"] == 0);
  CHECK(report["gamma"]["S"] == 0);
  CHECK(report["pairs"][0]["predicted_mean"].get<double>() == doctest::Approx(-0.5));
}

TEST_CASE("seed override from the environment") {
  TempDir dir;
  write(dir.file("run.cfg"), config_text("per-pair", 100, dir));
  ::setenv(kSeedEnvironmentVariable, "12345", 1);
  const auto r = invoke({"simulate", dir.file("run.cfg")});
  ::unsetenv(kSeedEnvironmentVariable);
  REQUIRE(r.code == kExitOk);
  const auto report = nlohmann::json::parse(slurp(dir.file("report.json")));
  CHECK(report["config"]["seed"] == 12345);
  CHECK(report["config"]["seed_source"] == "environment");
}

TEST_CASE("simulate exit codes") {
  TempDir dir;
  SUBCASE("zero trials writes nothing") {
    write(dir.file("run.cfg"), config_text("per-pair", 0, dir));
    CHECK(invoke({"simulate", dir.file("run.cfg")}).code == kExitInvalid);
    CHECK_FALSE(fs::exists(dir.file("trials.csv")));
    CHECK_FALSE(fs::exists(dir.file("report.json")));
  }
  SUBCASE("unwritable output") {
    write(dir.file("run.cfg"), config_text("per-pair", 10, dir));
    CHECK(invoke({"simulate", dir.file("run.cfg"), "--log", "/nonexistent/dir/t.csv"}).code == kExitIo);
  }
  SUBCASE("bad config") {
    write(dir.file("run.cfg"), "mode = per-pair\n");
    CHECK(invoke({"simulate", dir.file("run.cfg")}).code == kExitInvalid);
    write(dir.file("run.cfg"), config_text("quantum", 10, dir));
    CHECK(invoke({"simulate", dir.file("run.cfg")}).code == kExitInvalid);
    CHECK(invoke({"simulate", dir.file("missing.cfg")}).code == kExitInvalid);
  }
  SUBCASE("bad arguments") {
    CHECK(invoke({}).code == kExitInvalid);
    CHECK(invoke({"simulate"}).code == kExitInvalid);
    CHECK(invoke({"frobnicate"}).code == kExitInvalid);
  }
}

TEST_CASE("audit exit codes") {
  TempDir dir;
  write(dir.file("empty.csv"), "");
  CHECK(invoke({"audit", dir.file("empty.csv")}).code == kExitInvalid);
  write(dir.file("zero.csv"), "trial_index,block,setting_pair,time_index,a_outcome,b_outcome\n0,sep0,AB,0,0,1\n");
  const auto r = invoke({"audit", dir.file("zero.csv")});
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(invoke({"audit", dir.file("missing.csv")}).code == kExitIo);
}

TEST_CASE("check") {
  TempDir dir;
  SUBCASE("chain is acyclic and feasible") {
    write(dir.file("chain.scn"), kChain);
    const auto r = invoke({"check", dir.file("chain.scn"), "--cross-check"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("cyclicity: acyclic") != std::string::npos);
    CHECK(r.out.find("feasibility: feasible") != std::string::npos);
    CHECK(r.out.find("witness:") != std::string::npos);
  }
  SUBCASE("quantum CHSH tables are cyclic and infeasible") {
    std::ofstream(dir.file("q.scn")) << "variables: Aa Ad Bb Bc\n"
                                        "constraint: Aa Bb\n0.42677669529663687 0.0732233047033631 0.0732233047033631 0.42677669529663687\n"
                                        "constraint: Aa Bc\n0.42677669529663687 0.0732233047033631 0.0732233047033631 0.42677669529663687\n"
                                        "constraint: Ad Bb\n0.42677669529663687 0.0732233047033631 0.0732233047033631 0.42677669529663687\n"
                                        "constraint: Ad Bc\n0.0732233047033631 0.42677669529663687 0.42677669529663687 0.0732233047033631\n";
    const auto r = invoke({"check", dir.file("q.scn"), "--json", "--cross-check"});
    CHECK(r.code == kExitInfeasible);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["cyclicity"] == "cyclic");
    CHECK(j["feasibility"]["certificate"]["value"].get<double>() == doctest::Approx(2.8284271247461903));
    CHECK(j["vertex_oracle"]["agrees"] == true);
  }
  SUBCASE("table summing to 0.9") {
    write(dir.file("bad.scn"), "variables: X Y\nconstraint: X Y\n0.3 0.2 0.2 0.2\n");
    CHECK(invoke({"check", dir.file("bad.scn")}).code == kExitInvalid);
  }
  SUBCASE("overlap disagreement") {
    write(dir.file("bad.scn"), "variables: X Y\nconstraint: X\n0.5 0.5\nconstraint: X Y\n0.4 0.4 0.1 0.1\n");
    const auto r = invoke({"check", dir.file("bad.scn")});
    CHECK(r.code == kExitInvalid);
    CHECK(r.err.find("constraint") != std::string::npos);
  }
  SUBCASE("missing file") { CHECK(invoke({"check", dir.file("none.scn")}).code == kExitIo); }
}

TEST_CASE("oracle") {
  auto facet = [](std::vector<std::string> args) {
    args.insert(args.begin(), {"oracle", "--json"});
    const auto r = invoke(args);
    REQUIRE(r.code == kExitOk);
    return nlohmann::json::parse(r.out)["chsh_facet_value"].get<double>();
  };
  CHECK(facet({}) == doctest::Approx(2.8284271247461903));
  CHECK(facet({"--a", "30", "--b", "30", "--c", "30", "--d", "30"}) == doctest::Approx(2.0));
  CHECK(std::abs(facet({"--a", "0", "--b", "90", "--c", "90", "--d", "0"})) < 1e-12);
  const auto text = invoke({"oracle"});
  CHECK(text.out.find("chsh facet value: 2.82842712474619") != std::string::npos);
  CHECK(invoke({"oracle", "--a", "x"}).code == kExitInvalid);
}

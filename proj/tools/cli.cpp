#include "cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellkit/bellkit.h"

namespace bellkit::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<const char*, 4> kSettingNames{"a", "b", "c", "d"};
constexpr std::array<const char*, 4> kPairNames{"AB", "AC", "DB", "DC"};
// Indices into (a, b, c, d) for the station-1 and station-2 setting of each pair.
constexpr std::array<std::array<int, 2>, 4> kPairSettings{{{0, 1}, {0, 2}, {3, 1}, {3, 2}}};

constexpr const char* kSignConvention =
    "gamma = p_AB + p_AC + p_DB - p_DC with p = a_outcome * b_outcome; separate-space modes sample "
    "the single-pair measure (E[p] = +s1.s2); the common-space sign model sets B_y = -A_y";

struct StatusError : std::runtime_error {
  StatusError(bk_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  bk_status status;
};

void check(bk_status status, const std::string& context) {
  if (status != BK_OK) throw StatusError(status, context + ": " + bk_last_error());
}

int exit_code_for(bk_status status) { return status == BK_E_IO ? kExitIo : kExitInvalid; }

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using PlanPtr = std::unique_ptr<bk_plan, Deleter<bk_plan, bk_plan_destroy>>;
using DatasetPtr = std::unique_ptr<bk_dataset, Deleter<bk_dataset, bk_dataset_destroy>>;
using ScenarioPtr = std::unique_ptr<bk_scenario, Deleter<bk_scenario, bk_scenario_destroy>>;
using FeasibilityPtr = std::unique_ptr<bk_feasibility, Deleter<bk_feasibility, bk_feasibility_destroy>>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_value(const std::string& text, const std::string& key, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw std::runtime_error("config line " + std::to_string(line) + ": bad value '" + text + "' for " + key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v))
      throw std::runtime_error("config line " + std::to_string(line) + ": non-finite value for " + key);
  }
  return v;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << text;
  out.flush();
  return static_cast<bool>(out);
}

json pair_json(const bk_pair_summary& s) {
  return json{{"count", s.count},
              {"product_sum", s.product_sum},
              {"mean", s.mean},
              {"standard_error", s.standard_error},
              {"cells", {{"--", s.cells[0]}, {"-+", s.cells[1]}, {"+-", s.cells[2]}, {"++", s.cells[3]}}}};
}

json gamma_json(const bk_gamma_summary& g) {
  return json{{"M", g.M},   {"delta", g.delta}, {"J", g.J}, {"O", g.O}, {"P", g.P},
              {"Q", g.Q},   {"R", g.R},         {"S", g.S}, {"gamma_sum", g.gamma_sum}};
}

json r_bound_json(const bk_gamma_summary& g) {
  return json{{"applicable", g.r_bound_applicable != 0},
              {"required_R", g.r_bound_required},
              {"slack", g.r_bound_slack},
              {"pass", g.r_bound_pass != 0}};
}

// Shared part of simulate and audit reports: everything derived from the trial data alone.
json data_report(const bk_dataset* data) {
  json pairs = json::array();
  for (int p = 0; p < 4; ++p) {
    bk_pair_summary s{};
    check(bk_dataset_pair_summary(data, static_cast<bk_pair>(p), &s), "pair summary");
    json entry{{"label", kPairNames[p]}};
    entry.update(pair_json(s));
    pairs.push_back(entry);
  }
  bk_gamma_summary g{};
  check(bk_dataset_gamma(data, &g), "gamma statistics");
  return json{{"space", bk_dataset_is_common_space(data) ? "common" : "separate"},
              {"trials_per_pair", bk_dataset_trials_per_pair(data)},
              {"pairs", pairs},
              {"gamma", gamma_json(g)},
              {"r_bound", r_bound_json(g)}};
}

double angle_between(const bk_vec3& a, const bk_vec3& b) {
  const double d = std::clamp(a.x * b.x + a.y * b.y + a.z * b.z, -1.0, 1.0);
  return std::acos(d);
}

// ---- simulate ----------------------------------------------------------------

int cmd_simulate(const std::string& config_path, const std::optional<std::string>& log_override,
                 const std::optional<std::string>& report_override, const std::optional<std::string>& series_override,
                 const std::optional<unsigned>& threads_override,
                 std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  if (log_override) cfg.log_path = *log_override;
  if (report_override) cfg.report_path = *report_override;
  if (series_override) cfg.series_path = *series_override;
  if (threads_override) cfg.threads = *threads_override;
  if (cfg.log_path.empty() || cfg.report_path.empty()) {
    err << "error: config must name both a log and a report path\n";
    return kExitInvalid;
  }

  std::string seed_source = "config";
  if (const char* env = std::getenv(kSeedEnvironmentVariable); env != nullptr && *env != '\0') {
    try {
      cfg.seed = parse_value<std::uint64_t>(env, kSeedEnvironmentVariable, 0);
    } catch (const std::exception&) {
      err << "error: " << kSeedEnvironmentVariable << " is not an unsigned integer\n";
      return kExitInvalid;
    }
    seed_source = "environment";
  }

  try {
    bk_mode mode;
    if (cfg.mode == "per-pair") mode = BK_MODE_PER_PAIR;
    else if (cfg.mode == "common-space") mode = BK_MODE_COMMON_SPACE;
    else if (cfg.mode == "instrument") mode = BK_MODE_INSTRUMENT;
    else throw StatusError(BK_E_INVALID_ARGUMENT, "unknown mode '" + cfg.mode + "'");

    std::array<bk_vec3, 4> settings{};
    for (int i = 0; i < 4; ++i)
      check(bk_make_setting(cfg.angles[i].theta_deg, cfg.angles[i].phi_deg, &settings[i]),
            std::string("setting ") + kSettingNames[i]);

    bk_plan* raw_plan = nullptr;
    check(bk_plan_create(settings.data(), cfg.trials, cfg.seed, mode, &raw_plan), "plan");
    PlanPtr plan(raw_plan);

    bk_dataset* raw_data = nullptr;
    check(bk_simulate(plan.get(), cfg.threads, &raw_data), "simulation");
    DatasetPtr data(raw_data);

    check(bk_dataset_write_log(data.get(), cfg.log_path.c_str()), "trial log");

    json config_echo{{"mode", cfg.mode}, {"trials_per_pair", cfg.trials}, {"seed", cfg.seed},
                     {"seed_source", seed_source}, {"threads", cfg.threads}, {"log", cfg.log_path},
                     {"report", cfg.report_path}};
    json angles = json::object();
    for (int i = 0; i < 4; ++i)
      angles[kSettingNames[i]] = {{"theta_deg", cfg.angles[i].theta_deg},
                                  {"phi_deg", cfg.angles[i].phi_deg},
                                  {"vector", {settings[i].x, settings[i].y, settings[i].z}}};
    config_echo["angles"] = angles;

    json report{{"tool", "bellkit"}, {"version", bk_version()}, {"command", "simulate"},
                {"sign_convention", kSignConvention}, {"config", config_echo}};
    report.update(data_report(data.get()));

    // Model predictions for comparison with the empirical pair means.
    std::array<double, 4> predicted{};
    for (int p = 0; p < 4; ++p) {
      const bk_vec3& s1 = settings[kPairSettings[p][0]];
      const bk_vec3& s2 = settings[kPairSettings[p][1]];
      if (mode == BK_MODE_COMMON_SPACE) {
        predicted[p] = -(1.0 - 2.0 * angle_between(s1, s2) / std::numbers::pi);
      } else {
        bk_pair_table t{};
        check(bk_joint_pair_distribution(&s1, &s2, &t), "oracle");
        predicted[p] = t.expectation;
      }
      report["pairs"][p]["predicted_mean"] = predicted[p];
    }
    report["prediction"] = {
        {"model", mode == BK_MODE_COMMON_SPACE ? "sign model on the unit sphere" : "singlet pair measure"},
        {"chsh_value", bk_chsh_facet_value(predicted[0], predicted[1], predicted[2], predicted[3])}};

    if (!cfg.series_path.empty()) {
      const std::uint64_t J = bk_dataset_trials_per_pair(data.get());
      std::vector<double> running(J);
      std::size_t written = 0;
      check(bk_dataset_running_mean(data.get(), running.data(), running.size(), &written), "series");
      std::string csv = "quadruple,running_M\n";
      for (std::size_t k = 0; k < written; ++k) csv += std::to_string(k + 1) + "," + format_double(running[k]) + "\n";
      if (!write_text(cfg.series_path, csv)) throw StatusError(BK_E_IO, "cannot write series " + cfg.series_path);
      report["config"]["series"] = cfg.series_path;
    }

    if (!write_text(cfg.report_path, report.dump(2) + "\n"))
      throw StatusError(BK_E_IO, "cannot write report " + cfg.report_path);

    out << "M = " << format_double(report["gamma"]["M"].get<double>()) << " over J = " << cfg.trials
        << " quadruples; log " << cfg.log_path << ", report " << cfg.report_path << '\n';
    return kExitOk;
  } catch (const StatusError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.status);
  }
}

// ---- audit -------------------------------------------------------------------

int cmd_audit(const std::string& log_path, const std::optional<std::string>& report_path, std::ostream& out,
              std::ostream& err) {
  try {
    bk_dataset* raw = nullptr;
    check(bk_dataset_read_log(log_path.c_str(), &raw), "trial log");
    DatasetPtr data(raw);
    json report{{"tool", "bellkit"}, {"version", bk_version()}, {"command", "audit"},
                {"sign_convention", kSignConvention}, {"log", log_path}};
    report.update(data_report(data.get()));
    const std::string text = report.dump(2) + "\n";
    if (report_path) {
      if (!write_text(*report_path, text)) throw StatusError(BK_E_IO, "cannot write report " + *report_path);
      out << "audit " << (report["r_bound"]["pass"].get<bool>() ? "pass" : "FAIL") << ": M = "
          << format_double(report["gamma"]["M"].get<double>()) << ", R = " << report["gamma"]["R"].get<std::uint64_t>()
          << '\n';
    } else {
      out << text;
    }
    return report["r_bound"]["pass"].get<bool>() ? kExitOk : kExitInvalid;
  } catch (const StatusError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.status);
  }
}

// ---- check -------------------------------------------------------------------

std::string atom_label(const bk_scenario* s, std::size_t atom) {
  const std::size_t n = bk_scenario_variable_count(s);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool plus = (atom >> (n - 1 - i)) & 1u;
    out += (i ? " " : "") + std::string(bk_scenario_variable_name(s, i)) + (plus ? "=+1" : "=-1");
  }
  return out;
}

json feasibility_json(const bk_scenario* s, const bk_feasibility* f) {
  json j{{"feasible", bk_feasibility_is_feasible(f) != 0},
         {"residual", bk_feasibility_residual(f)},
         {"exact", bk_feasibility_is_exact(f) != 0}};
  if (bk_feasibility_is_feasible(f)) {
    std::size_t size = 0;
    const double* w = bk_feasibility_witness(f, &size);
    json support = json::array();
    for (std::size_t atom = 0; atom < size; ++atom)
      if (w[atom] > 1e-12) support.push_back({{"atom", atom}, {"assignment", atom_label(s, atom)}, {"p", w[atom]}});
    j["witness"] = support;
  } else {
    bk_certificate_info info{};
    check(bk_feasibility_certificate(f, &info), "certificate");
    json terms = json::array();
    for (std::size_t t = 0; t < info.term_count; ++t) {
      bk_certificate_term term{};
      check(bk_feasibility_certificate_term(f, t, &term), "certificate term");
      terms.push_back({{"constraint", term.constraint}, {"cell", term.cell}, {"coefficient", term.coefficient}});
    }
    j["certificate"] = {{"kind", info.kind}, {"description", info.description}, {"value", info.value},
                        {"bound", info.bound}, {"terms", terms}};
  }
  return j;
}

int cmd_check(const std::string& path, bool as_json, bool cross_check, std::ostream& out, std::ostream& err) {
  try {
    bk_scenario* raw = nullptr;
    check(bk_scenario_load(path.c_str(), &raw), "scenario");
    ScenarioPtr scenario(raw);
    check(bk_scenario_validate(scenario.get()), "scenario");

    int cyclic = 0;
    check(bk_scenario_cyclicity(scenario.get(), &cyclic), "cyclicity");
    bk_feasibility* raw_f = nullptr;
    check(bk_scenario_feasibility(scenario.get(), &raw_f), "feasibility");
    FeasibilityPtr feas(raw_f);
    const bool feasible = bk_feasibility_is_feasible(feas.get()) != 0;

    json report{{"tool", "bellkit"}, {"version", bk_version()}, {"command", "check"}, {"scenario", path}};
    json vars = json::array();
    for (std::size_t i = 0; i < bk_scenario_variable_count(scenario.get()); ++i)
      vars.push_back(bk_scenario_variable_name(scenario.get(), i));
    report["variables"] = vars;
    report["cyclicity"] = cyclic ? "cyclic" : "acyclic";
    report["feasibility"] = feasibility_json(scenario.get(), feas.get());

    if (cross_check) {
      bk_feasibility* raw_o = nullptr;
      check(bk_scenario_vertex_oracle(scenario.get(), &raw_o), "vertex oracle");
      FeasibilityPtr oracle(raw_o);
      const bool agree = (bk_feasibility_is_feasible(oracle.get()) != 0) == feasible;
      report["vertex_oracle"] = {{"feasible", bk_feasibility_is_feasible(oracle.get()) != 0}, {"agrees", agree}};
      if (!agree) {
        err << "error: vertex oracle disagrees with the LP verdict\n";
        return kExitInvalid;
      }
    }

    if (as_json) {
      out << report.dump(2) << '\n';
    } else {
      out << "variables:";
      for (const auto& v : vars) out << ' ' << v.get<std::string>();
      out << "\nconstraints: " << bk_scenario_constraint_count(scenario.get()) << '\n';
      out << "cyclicity: " << report["cyclicity"].get<std::string>() << '\n';
      out << "feasibility: " << (feasible ? "feasible" : "infeasible") << '\n';
      const json& f = report["feasibility"];
      if (feasible) {
        out << "witness:\n";
        for (const auto& w : f["witness"])
          out << "  " << w["assignment"].get<std::string>() << "  " << format_double(w["p"].get<double>()) << '\n';
      } else {
        const json& c = f["certificate"];
        out << "certificate (" << c["kind"].get<std::string>() << "): " << c["description"].get<std::string>() << '\n'
            << "  value " << format_double(c["value"].get<double>()) << " > bound "
            << format_double(c["bound"].get<double>()) << '\n';
      }
      if (report.contains("vertex_oracle")) out << "vertex oracle: agrees\n";
    }
    return feasible ? kExitOk : kExitInfeasible;
  } catch (const StatusError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.status);
  }
}

// ---- oracle ------------------------------------------------------------------

int cmd_oracle(const std::array<double, 4>& theta, const std::array<double, 4>& phi, bool as_json, std::ostream& out,
               std::ostream& err) {
  try {
    std::array<bk_vec3, 4> settings{};
    for (int i = 0; i < 4; ++i)
      check(bk_make_setting(theta[i], phi[i], &settings[i]), std::string("setting ") + kSettingNames[i]);

    json pairs = json::array();
    std::array<double, 4> e{};
    for (int p = 0; p < 4; ++p) {
      const bk_vec3& s1 = settings[kPairSettings[p][0]];
      const bk_vec3& s2 = settings[kPairSettings[p][1]];
      bk_pair_table t{};
      check(bk_joint_pair_distribution(&s1, &s2, &t), "pair distribution");
      double singlet = 0;
      check(bk_singlet_tensor_expectation(&s1, &s2, &singlet), "singlet expectation");
      e[p] = t.expectation;
      pairs.push_back({{"label", kPairNames[p]},
                       {"table", {t.p[0], t.p[1], t.p[2], t.p[3]}},
                       {"expectation_AA", t.expectation},
                       {"expectation_AB", -t.expectation},
                       {"singlet_tensor", singlet}});
    }
    const double facet = bk_chsh_facet_value(e[0], e[1], e[2], e[3]);

    if (as_json) {
      out << json{{"tool", "bellkit"}, {"command", "oracle"}, {"pairs", pairs}, {"chsh_facet_value", facet}}.dump(2)
          << '\n';
    } else {
      out << "pair  p(--)                 p(-+)                 p(+-)                 p(++)                 "
             "E[AA]\n";
      for (const auto& p : pairs) {
        out << p["label"].get<std::string>() << "   ";
        for (const auto& v : p["table"]) {
          std::string s = format_double(v.get<double>());
          s.resize(std::max<std::size_t>(s.size(), 22), ' ');
          out << s;
        }
        out << format_double(p["expectation_AA"].get<double>()) << '\n';
      }
      out << "chsh facet value: " << format_double(facet) << '\n';
    }
    return kExitOk;
  } catch (const StatusError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.status);
  }
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!seen.emplace(key, line).second)
      throw std::runtime_error("config line " + std::to_string(line) + ": duplicate key '" + key + "'");

    bool known = true;
    if (key == "mode") cfg.mode = value;
    else if (key == "trials") cfg.trials = parse_value<std::uint64_t>(value, key, line);
    else if (key == "seed") cfg.seed = parse_value<std::uint64_t>(value, key, line);
    else if (key == "threads") cfg.threads = parse_value<unsigned>(value, key, line);
    else if (key == "log") cfg.log_path = value;
    else if (key == "report") cfg.report_path = value;
    else if (key == "series") cfg.series_path = value;
    else {
      known = false;
      for (int i = 0; i < 4; ++i) {
        if (key == std::string("angle_") + kSettingNames[i]) {
          cfg.angles[i].theta_deg = parse_value<double>(value, key, line);
          known = true;
        } else if (key == std::string("azimuth_") + kSettingNames[i]) {
          cfg.angles[i].phi_deg = parse_value<double>(value, key, line);
          known = true;
        }
      }
    }
    if (!known) throw std::runtime_error("config line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  for (const char* required : {"mode", "angle_a", "angle_b", "angle_c", "angle_d", "trials", "seed"})
    if (!seen.contains(required)) throw std::runtime_error(std::string("config is missing '") + required + "'");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  return parse_config(in);
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "mode = " << cfg.mode << '\n';
  for (int i = 0; i < 4; ++i) {
    os << "angle_" << kSettingNames[i] << " = " << format_double(cfg.angles[i].theta_deg) << '\n';
    os << "azimuth_" << kSettingNames[i] << " = " << format_double(cfg.angles[i].phi_deg) << '\n';
  }
  os << "trials = " << cfg.trials << '\n' << "seed = " << cfg.seed << '\n' << "threads = " << cfg.threads << '\n';
  if (!cfg.log_path.empty()) os << "log = " << cfg.log_path << '\n';
  if (!cfg.report_path.empty()) os << "report = " << cfg.report_path << '\n';
  if (!cfg.series_path.empty()) os << "series = " << cfg.series_path << '\n';
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bellkit: CHSH experiments, quantum predictions and marginal-problem checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> log_override, report_override, series_override;
  std::optional<unsigned> threads_override;
  auto* simulate = app.add_subcommand("simulate", "run an experiment plan and write a trial log and report");
  simulate->add_option("config,--config", config_path, "config file")->required();
  simulate->add_option("--log", log_override, "override the trial log path");
  simulate->add_option("--report", report_override, "override the report path");
  simulate->add_option("--series", series_override, "write the running mean of gamma as CSV");
  simulate->add_option("--threads", threads_override, "worker threads");

  std::string log_path;
  std::optional<std::string> audit_report;
  auto* audit = app.add_subcommand("audit", "recompute gamma statistics and the R-count bound from a trial log");
  audit->add_option("log", log_path, "trial log")->required();
  audit->add_option("--report", audit_report, "write the report here instead of stdout");

  std::string scenario_path;
  bool check_json = false, cross_check = false;
  auto* check_cmd = app.add_subcommand("check", "classify and solve a marginal-problem scenario");
  check_cmd->add_option("scenario", scenario_path, "scenario file")->required();
  check_cmd->add_flag("--json", check_json, "print a JSON report");
  check_cmd->add_flag("--cross-check", cross_check, "also run the deterministic vertex oracle (n <= 10)");

  std::array<double, 4> theta{0.0, 45.0, -45.0, 90.0};
  std::array<double, 4> phi{0.0, 0.0, 0.0, 0.0};
  bool oracle_json = false;
  auto* oracle = app.add_subcommand("oracle", "print singlet predictions for the four CHSH setting pairs");
  for (int i = 0; i < 4; ++i) {
    oracle->add_option(std::string("--") + kSettingNames[i], theta[i], std::string("polar angle of ") + kSettingNames[i] + " in degrees");
    oracle->add_option(std::string("--azimuth-") + kSettingNames[i], phi[i], "azimuth in degrees");
  }
  oracle->add_flag("--json", oracle_json, "print JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  if (*simulate) return cmd_simulate(config_path, log_override, report_override, series_override, threads_override, out, err);
  if (*audit) return cmd_audit(log_path, audit_report, out, err);
  if (*check_cmd) return cmd_check(scenario_path, check_json, cross_check, out, err);
  return cmd_oracle(theta, phi, oracle_json, out, err);
}

}  // namespace bellkit::cli

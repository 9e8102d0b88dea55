#include "bellkit/bellkit.h"

#include <exception>
#include <sstream>
#include <string>

#include "bellkit/chsh.hpp"
#include "bellkit/consistency.hpp"
#include "bellkit/generators.hpp"
#include "bellkit/quantum.hpp"
#include "bellkit/scenario_io.hpp"
#include "bellkit/trial_log.hpp"

using namespace bellkit;

struct bk_plan {
  ExperimentPlan plan;
};

struct bk_dataset {
  TrialData data;
};

struct bk_scenario {
  MarginalScenario scenario;
};

struct bk_feasibility {
  FeasibilityResult result;
};

namespace {

thread_local std::string g_last_error;

bk_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return BK_E_INVALID_ARGUMENT;
    case ErrorCode::invalid_plan: return BK_E_INVALID_PLAN;
    case ErrorCode::corrupted_data: return BK_E_CORRUPTED_DATA;
    case ErrorCode::model_violation: return BK_E_MODEL_VIOLATION;
    case ErrorCode::size_limit: return BK_E_SIZE_LIMIT;
    case ErrorCode::precondition: return BK_E_PRECONDITION;
    case ErrorCode::parse: return BK_E_PARSE;
    case ErrorCode::io: return BK_E_IO;
  }
  return BK_E_INTERNAL;
}

template <class F>
bk_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return BK_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BK_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return BK_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw Error(ErrorCode::invalid_argument, std::string(what) + " is null");
}

SettingVector to_setting(const bk_vec3* v) {
  require(v, "setting");
  return SettingVector(v->x, v->y, v->z);
}

chsh::GammaReport gamma_report(const TrialData& data) {
  if (const auto* sep = std::get_if<std::vector<TrialRecord>>(&data))
    return chsh::expectation_M(chsh::gamma_exp(*sep));
  return chsh::gamma_common(std::get<std::vector<QuadrupleRecord>>(data)).report;
}

std::vector<int> gamma_values(const TrialData& data) {
  if (const auto* sep = std::get_if<std::vector<TrialRecord>>(&data)) return chsh::gamma_exp(*sep);
  return chsh::gamma_common(std::get<std::vector<QuadrupleRecord>>(data)).gammas;
}

}  // namespace

extern "C" {

BK_API const char* bk_version(void) { return "0.1.0"; }

BK_API const char* bk_status_name(bk_status status) {
  switch (status) {
    case BK_OK: return "ok";
    case BK_E_INVALID_ARGUMENT: return "invalid argument";
    case BK_E_INVALID_PLAN: return "invalid plan";
    case BK_E_CORRUPTED_DATA: return "corrupted data";
    case BK_E_MODEL_VIOLATION: return "model violation";
    case BK_E_SIZE_LIMIT: return "size limit";
    case BK_E_PRECONDITION: return "precondition";
    case BK_E_PARSE: return "parse error";
    case BK_E_IO: return "I/O error";
    case BK_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

BK_API const char* bk_last_error(void) { return g_last_error.c_str(); }

BK_API bk_status bk_make_setting(double theta_deg, double phi_deg, bk_vec3* out) {
  return guarded([&] {
    require(out, "out");
    const SettingVector s = make_setting(theta_deg, phi_deg);
    *out = bk_vec3{s.x(), s.y(), s.z()};
  });
}

BK_API bk_status bk_joint_pair_distribution(const bk_vec3* a, const bk_vec3* b, bk_pair_table* out) {
  return guarded([&] {
    require(out, "out");
    const auto dist = quantum::joint_pair_distribution(to_setting(a), to_setting(b));
    const auto flat = dist.flattened();
    for (int i = 0; i < 4; ++i) out->p[i] = flat[i];
    out->expectation = dist.product_expectation();
  });
}

BK_API bk_status bk_singlet_tensor_expectation(const bk_vec3* a, const bk_vec3* b, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = quantum::singlet_tensor_expectation(to_setting(a), to_setting(b));
  });
}

BK_API double bk_chsh_facet_value(double e_ab, double e_ac, double e_db, double e_dc) {
  return chsh_facet_value(e_ab, e_ac, e_db, e_dc);
}

BK_API bk_status bk_plan_create(const bk_vec3 settings[4], uint64_t trials_per_pair, uint64_t seed,
                                bk_mode mode, bk_plan** out) {
  return guarded([&] {
    require(settings, "settings");
    require(out, "out");
    *out = nullptr;
    Mode m;
    switch (mode) {
      case BK_MODE_PER_PAIR: m = Mode::per_pair; break;
      case BK_MODE_COMMON_SPACE: m = Mode::common_space; break;
      case BK_MODE_INSTRUMENT: m = Mode::instrument; break;
      default: throw Error(ErrorCode::invalid_argument, "unknown mode");
    }
    ExperimentPlan plan{Settings{to_setting(&settings[0]), to_setting(&settings[1]), to_setting(&settings[2]),
                                 to_setting(&settings[3])},
                        trials_per_pair, seed, m};
    plan.validate();
    *out = new bk_plan{plan};
  });
}

BK_API void bk_plan_destroy(bk_plan* plan) { delete plan; }

BK_API bk_status bk_simulate(const bk_plan* plan, unsigned threads, bk_dataset** out) {
  return guarded([&] {
    require(plan, "plan");
    require(out, "out");
    *out = nullptr;
    const GeneratorOptions opts{threads};
    switch (plan->plan.mode) {
      case Mode::per_pair: *out = new bk_dataset{run_per_pair(plan->plan, opts)}; break;
      case Mode::common_space: *out = new bk_dataset{run_common_space(plan->plan, opts)}; break;
      case Mode::instrument: *out = new bk_dataset{run_instrument(plan->plan, opts)}; break;
    }
  });
}

BK_API bk_status bk_dataset_read_log(const char* path, bk_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new bk_dataset{read_trial_log(std::filesystem::path(path))};
  });
}

BK_API bk_status bk_dataset_write_log(const bk_dataset* data, const char* path) {
  return guarded([&] {
    require(data, "data");
    require(path, "path");
    write_trial_log(std::filesystem::path(path), data->data);
  });
}

BK_API void bk_dataset_destroy(bk_dataset* data) { delete data; }

BK_API int bk_dataset_is_common_space(const bk_dataset* data) {
  return data != nullptr && std::holds_alternative<std::vector<QuadrupleRecord>>(data->data);
}

BK_API uint64_t bk_dataset_trials_per_pair(const bk_dataset* data) {
  if (data == nullptr) return 0;
  if (const auto* sep = std::get_if<std::vector<TrialRecord>>(&data->data)) {
    const auto stats = chsh::pair_stats(*sep);
    return stats[0].count;
  }
  return std::get<std::vector<QuadrupleRecord>>(data->data).size();
}

BK_API bk_status bk_dataset_pair_summary(const bk_dataset* data, bk_pair pair, bk_pair_summary* out) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    if (pair < BK_PAIR_AB || pair > BK_PAIR_DC) throw Error(ErrorCode::invalid_argument, "unknown pair");
    const auto stats = std::visit([](const auto& v) { return chsh::pair_stats(std::span(v)); }, data->data);
    const chsh::PairStats& s = stats[static_cast<std::size_t>(pair)];
    out->count = s.count;
    out->product_sum = s.product_sum;
    out->mean = s.mean();
    out->standard_error = s.standard_error();
    for (int i = 0; i < 4; ++i) out->cells[i] = s.cells[i];
  });
}

BK_API bk_status bk_dataset_gamma(const bk_dataset* data, bk_gamma_summary* out) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    const chsh::GammaReport rep = gamma_report(data->data);
    const chsh::RBoundVerdict verdict = chsh::r_bound_audit(rep);
    *out = bk_gamma_summary{rep.M,       rep.delta,       rep.gamma_sum,       rep.stats.O,
                            rep.stats.P, rep.stats.Q,     rep.stats.R,         rep.stats.S,
                            rep.stats.J, verdict.applicable, verdict.pass,     verdict.required,
                            verdict.slack};
  });
}

BK_API bk_status bk_dataset_running_mean(const bk_dataset* data, double* out, size_t capacity, size_t* written) {
  return guarded([&] {
    require(data, "data");
    require(written, "written");
    const auto gammas = gamma_values(data->data);
    const std::size_t n = std::min(capacity, gammas.size());
    if (n > 0) require(out, "out");
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
      sum += gammas[k];
      out[k] = static_cast<double>(sum) / static_cast<double>(k + 1);
    }
    *written = n;
  });
}

BK_API bk_status bk_scenario_load(const char* path, bk_scenario** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new bk_scenario{load_scenario(path)};
  });
}

BK_API bk_status bk_scenario_parse(const char* text, bk_scenario** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    std::istringstream in(text);
    *out = new bk_scenario{parse_scenario(in)};
  });
}

BK_API void bk_scenario_destroy(bk_scenario* scenario) { delete scenario; }

BK_API size_t bk_scenario_variable_count(const bk_scenario* scenario) {
  return scenario ? scenario->scenario.variables.size() : 0;
}

BK_API const char* bk_scenario_variable_name(const bk_scenario* scenario, size_t index) {
  if (!scenario || index >= scenario->scenario.variables.size()) return nullptr;
  return scenario->scenario.variables[index].c_str();
}

BK_API size_t bk_scenario_constraint_count(const bk_scenario* scenario) {
  return scenario ? scenario->scenario.constraints.size() : 0;
}

BK_API bk_status bk_scenario_validate(const bk_scenario* scenario) {
  return guarded([&] {
    require(scenario, "scenario");
    validate_scenario(scenario->scenario);
  });
}

BK_API bk_status bk_scenario_cyclicity(const bk_scenario* scenario, int* cyclic) {
  return guarded([&] {
    require(scenario, "scenario");
    require(cyclic, "cyclic");
    *cyclic = vorobev_cyclicity(scenario->scenario) == Cyclicity::cyclic;
  });
}

BK_API bk_status bk_scenario_feasibility(const bk_scenario* scenario, bk_feasibility** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    *out = nullptr;
    *out = new bk_feasibility{joint_feasibility(scenario->scenario)};
  });
}

BK_API bk_status bk_scenario_vertex_oracle(const bk_scenario* scenario, bk_feasibility** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    *out = nullptr;
    *out = new bk_feasibility{deterministic_vertex_oracle(scenario->scenario)};
  });
}

BK_API void bk_feasibility_destroy(bk_feasibility* result) { delete result; }

BK_API int bk_feasibility_is_feasible(const bk_feasibility* result) { return result && result->result.feasible; }

BK_API double bk_feasibility_residual(const bk_feasibility* result) { return result ? result->result.residual : 0.0; }

BK_API int bk_feasibility_is_exact(const bk_feasibility* result) { return result && result->result.exact; }

BK_API const double* bk_feasibility_witness(const bk_feasibility* result, size_t* size) {
  if (!result || !result->result.witness) {
    if (size) *size = 0;
    return nullptr;
  }
  if (size) *size = result->result.witness->size();
  return result->result.witness->data();
}

BK_API bk_status bk_feasibility_certificate(const bk_feasibility* result, bk_certificate_info* out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    if (!result->result.certificate) throw Error(ErrorCode::invalid_argument, "feasible result has no certificate");
    const Certificate& c = *result->result.certificate;
    *out = bk_certificate_info{c.kind.c_str(), c.description.c_str(), c.value, c.bound, c.terms.size()};
  });
}

BK_API bk_status bk_feasibility_certificate_term(const bk_feasibility* result, size_t index, bk_certificate_term* out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    if (!result->result.certificate) throw Error(ErrorCode::invalid_argument, "feasible result has no certificate");
    const auto& terms = result->result.certificate->terms;
    if (index >= terms.size()) throw Error(ErrorCode::invalid_argument, "certificate term index out of range");
    *out = bk_certificate_term{terms[index].constraint, terms[index].cell, terms[index].coefficient};
  });
}

}  // extern "C"

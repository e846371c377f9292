#include "ergolab/ergolab.h"

#include <memory>
#include <string>
#include <vector>

#include "ergolab/runner.hpp"

using ergolab::experiment_config;
using ergolab::json;
using ergolab::run_report;

struct ergo_experiment {
  std::unique_ptr<experiment_config> config;
  std::string error;
  std::string report_text;
  std::string body_text;
  std::vector<std::pair<std::string, std::string>> tables;
  std::string scratch; // last string handed out by the table accessors
};

extern "C" {

const char* ergo_version(void) { return ergolab::ergolab_version; }

ergo_status ergo_experiment_create(const char* config_json, ergo_experiment** out) {
  if (!out) return ERGO_ERROR;
  auto* e = new ergo_experiment();
  *out = e;
  if (!config_json) {
    e->error = "null config";
    return ERGO_CONFIG_ERROR;
  }
  try {
    e->config = std::make_unique<experiment_config>(ergolab::parse_config(config_json));
    return ERGO_OK;
  } catch (const ergolab::config_error& err) {
    e->error = err.what();
    return ERGO_CONFIG_ERROR;
  } catch (const std::exception& err) {
    e->error = err.what();
    return ERGO_ERROR;
  }
}

void ergo_experiment_destroy(ergo_experiment* e) { delete e; }

ergo_status ergo_experiment_run(ergo_experiment* e, const char* subcommand,
                                const char* params_json) {
  if (!e) return ERGO_ERROR;
  if (!e->config) {
    e->error = "experiment has no valid config";
    return ERGO_CONFIG_ERROR;
  }
  try {
    std::string sub = subcommand && *subcommand ? subcommand : e->config->default_subcommand;
    json params = e->config->default_params;
    if (params_json && *params_json) {
      json given = json::parse(params_json);
      for (auto& [k, v] : given.items()) params[k] = v;
    }
    run_report rep = ergolab::run_experiment(*e->config, sub, params);
    json full{{"envelope", rep.envelope}, {"body", rep.body}};
    e->report_text = full.dump(2);
    e->body_text = rep.body.dump(2);
    e->tables.assign(rep.tables.begin(), rep.tables.end());
    e->error.clear();
    if (rep.exit_code == 0) return ERGO_OK;
    if (rep.exit_code == 2) return ERGO_CONFIG_ERROR;
    if (rep.exit_code == 3) return ERGO_BUDGET_EXCEEDED;
    return ERGO_CHECK_FAILED;
  } catch (const ergolab::budget_error& err) {
    e->error = err.what();
    return ERGO_BUDGET_EXCEEDED;
  } catch (const ergolab::config_error& err) {
    e->error = err.what();
    return ERGO_CONFIG_ERROR;
  } catch (const std::exception& err) {
    e->error = err.what();
    return ERGO_ERROR;
  }
}

const char* ergo_experiment_report(const ergo_experiment* e) {
  return e ? e->report_text.c_str() : "";
}

const char* ergo_experiment_body(const ergo_experiment* e) {
  return e ? e->body_text.c_str() : "";
}

int ergo_experiment_table_count(const ergo_experiment* e) {
  return e ? static_cast<int>(e->tables.size()) : 0;
}

const char* ergo_experiment_table_name(const ergo_experiment* e, int index) {
  if (!e || index < 0 || index >= static_cast<int>(e->tables.size())) return "";
  return e->tables[static_cast<size_t>(index)].first.c_str();
}

const char* ergo_experiment_table_csv(const ergo_experiment* e, const char* name) {
  if (!e || !name) return "";
  for (const auto& [n, csv] : e->tables)
    if (n == name) return csv.c_str();
  return "";
}

const char* ergo_experiment_error(const ergo_experiment* e) {
  return e ? e->error.c_str() : "";
}

int ergo_example_count(void) {
  return static_cast<int>(ergolab::examples_catalog().size());
}

const char* ergo_example_name(int index) {
  const auto& cat = ergolab::examples_catalog();
  if (index < 0 || index >= static_cast<int>(cat.size())) return "";
  return cat[static_cast<size_t>(index)].name.c_str();
}

const char* ergo_example_description(int index) {
  const auto& cat = ergolab::examples_catalog();
  if (index < 0 || index >= static_cast<int>(cat.size())) return "";
  return cat[static_cast<size_t>(index)].description.c_str();
}

const char* ergo_example_config(int index) {
  const auto& cat = ergolab::examples_catalog();
  if (index < 0 || index >= static_cast<int>(cat.size())) return "";
  return cat[static_cast<size_t>(index)].config_text.c_str();
}

} // extern "C"

#ifndef ERGOLAB_RUNNER_HPP
#define ERGOLAB_RUNNER_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ergolab/decomposition.hpp"
#include "ergolab/equilibrium.hpp"
#include "ergolab/potential.hpp"
#include "ergolab/shift.hpp"
#include "ergolab/suspension.hpp"

namespace ergolab {

using json = nlohmann::json;

// parsed experiment description: system, potential, decomposition, optional
// roof, scale ladder, budgets, seed
struct experiment_config {
  std::string name;
  std::string description;
  shift_system sys;
  potential phi = potential::zero();
  decomposition_rule rule = decomposition_rule::trivial();
  std::optional<roof_function> roof;
  std::optional<std::vector<double>> bernoulli_p;

  int m_delta = 7;
  int m_eps = 1;
  // derived ladder: rho = eps/8, rho' one dyadic step below rho (the dyadic
  // realization of rho - delta), gamma = eps/8
  int m_rho() const { return m_eps + 3; }
  int m_rho_prime() const { return m_rho() + 1; }
  int m_gamma() const { return m_eps + 2; } // gamma in (4 delta, eps/4]

  std::uint64_t node_budget = shift_system::default_budget;
  int n_max = 16;
  int t_max = 12;
  std::uint64_t seed = 1;

  std::string default_subcommand = "pressure";
  json default_params = json::object();
  json raw;
};

experiment_config parse_config(const std::string& config_text);

// deterministic FNV-1a hash of the canonicalized config
std::string config_hash(const json& canonical);

struct run_report {
  json envelope;                             // tool, version, hash, timestamp
  json body;                                 // deterministic payload
  std::map<std::string, std::string> tables; // CSV side tables
  bool pass = false;
  int exit_code = 0; // 0 pass, 1 check fail, 2 config error, 3 budget
};

run_report run_experiment(const experiment_config& cfg, const std::string& subcommand,
                          const json& params);

// embedded example catalog: (name, one-line provenance, config text)
struct example_entry {
  std::string name;
  std::string description;
  std::string config_text;
};
const std::vector<example_entry>& examples_catalog();

extern const char* const ergolab_version;

} // namespace ergolab

#endif

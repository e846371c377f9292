// ergolab command line: thermodynamic-formalism experiments on symbolic
// systems and suspension flows, driven through the C API of libergolab.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ergolab/ergolab.h"
#include "json.hpp"

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open config file: " << path << "\n";
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct experiment_guard {
  ergo_experiment* e = nullptr;
  ~experiment_guard() { ergo_experiment_destroy(e); }
};

int run_and_write(const std::string& config_text, const std::string& subcommand,
                  const json& params, const std::string& out_path) {
  experiment_guard guard;
  ergo_status st = ergo_experiment_create(config_text.c_str(), &guard.e);
  if (st != ERGO_OK) {
    std::cerr << "config error: " << ergo_experiment_error(guard.e) << "\n";
    return 2;
  }
  std::string params_text = params.dump();
  st = ergo_experiment_run(guard.e, subcommand.c_str(), params_text.c_str());
  if (st == ERGO_ERROR || (st == ERGO_CONFIG_ERROR && *ergo_experiment_error(guard.e))) {
    std::cerr << "error: " << ergo_experiment_error(guard.e) << "\n";
    return st == ERGO_CONFIG_ERROR ? 2 : 1;
  }

  std::string report = ergo_experiment_report(guard.e);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << report << "\n";
    // CSV side tables next to the JSON report
    std::string stem = out_path;
    auto dot = stem.rfind('.');
    if (dot != std::string::npos) stem = stem.substr(0, dot);
    for (int i = 0; i < ergo_experiment_table_count(guard.e); ++i) {
      std::string name = ergo_experiment_table_name(guard.e, i);
      std::ofstream csv(stem + "." + name + ".csv");
      csv << ergo_experiment_table_csv(guard.e, name.c_str());
    }
  } else {
    std::cout << report << "\n";
  }

  json body = json::parse(std::string(ergo_experiment_body(guard.e)));
  std::cout << "[" << (st == ERGO_OK ? "PASS" : st == ERGO_BUDGET_EXCEEDED ? "BUDGET" : "FAIL")
            << "] " << subcommand;
  if (body.contains("config")) std::cout << " (" << body["config"].value("name", "") << ")";
  std::cout << "\n";
  return static_cast<int>(st);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: pressure, equilibrium-state and specification experiments "
               "on shift spaces and suspension flows"};
  app.require_subcommand(1);

  std::string config_path, out_path, example_name;
  json params = json::object();

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    if (needs_config) {
      cmd->add_option("--system,--config", config_path, "experiment config (JSON)");
      cmd->add_option("--example", example_name, "use a shipped example config by name");
    }
    cmd->add_option("--out", out_path, "write the JSON report here (CSV tables beside it)");
  };

  std::string delta, eps, rho, measure = "rpf", relation = "ge";
  int nmax = 0, tmax = 0, sym = 1, nlo = 0, coreM = 0, tau = 4;
  double theta = 0.75;
  std::vector<int> m_list;
  std::vector<std::string> segments;
  std::string decompose_word;

  auto* c_pressure = app.add_subcommand("pressure", "two-scale partition sums and pressure");
  add_common(c_pressure);
  c_pressure->add_option("--delta", delta, "separation scale 2^-m");
  c_pressure->add_option("--eps", eps, "weight scale 2^-m'");
  c_pressure->add_option("--nmax", nmax, "largest segment length");

  auto* c_certify = app.add_subcommand("certify", "uniqueness hypothesis certificate");
  add_common(c_certify);
  c_certify->add_option("--delta", delta, "specification scale 2^-m");
  c_certify->add_option("--eps", eps, "Bowen/expansivity scale 2^-m'");
  c_certify->add_option("--m-list", m_list, "good-core parameters M to test");
  c_certify->add_option("--nmax", nmax, "pressure horizon");

  auto* c_gibbs = app.add_subcommand("gibbs", "two-sided Gibbs bound verification");
  add_common(c_gibbs);
  c_gibbs->add_option("--measure", measure, "rpf | bernoulli | empirical:n");
  c_gibbs->add_option("--rho", rho, "ball scale 2^-m");
  c_gibbs->add_option("--n-lo", nlo, "first order");
  c_gibbs->add_option("--n-hi", nmax, "last order");
  c_gibbs->add_option("--core-m", coreM, "good-core parameter for the lower bound");

  auto* c_entropy = app.add_subcommand("entropy", "entropy-expansivity checks");
  add_common(c_entropy);
  c_entropy->add_option("--eps", eps, "expansivity scale 2^-m");
  c_entropy->add_option("--nmax", nmax, "partition horizon");

  auto* c_flow = app.add_subcommand("flow-pressure", "suspension-flow pressure and Abramov");
  add_common(c_flow);
  c_flow->add_option("--delta", delta, "separation scale 2^-m");
  c_flow->add_option("--eps", eps, "weight scale");
  c_flow->add_option("--t-max", tmax, "largest flow time");

  auto* c_ldp = app.add_subcommand("ldp", "level-2 large-deviations upper bound");
  add_common(c_ldp);
  c_ldp->add_option("--symbol", sym, "constrained symbol");
  c_ldp->add_option("--relation", relation, "ge | le | eq");
  c_ldp->add_option("--theta", theta, "frequency threshold");
  c_ldp->add_option("--nmax", nmax, "largest order");

  auto* c_glue = app.add_subcommand("glue", "orbit gluing with specification gaps");
  add_common(c_glue);
  c_glue->add_option("--segments", segments, "segment words to shadow, in order")->required();
  c_glue->add_option("--delta", delta, "shadowing scale 2^-m");
  c_glue->add_option("--tau", tau, "maximum gap");

  auto* c_decompose = app.add_subcommand("decompose", "split a segment into (p, g, s)");
  add_common(c_decompose);
  c_decompose->add_option("--word", decompose_word, "segment word")->required();

  auto* c_examples = app.add_subcommand("examples", "list the shipped example configs");
  add_common(c_examples, false);

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(c_examples)) {
    for (int i = 0; i < ergo_example_count(); ++i)
      std::cout << ergo_example_name(i) << "\t" << ergo_example_description(i) << "\n";
    return 0;
  }

  std::string config_text;
  if (!example_name.empty()) {
    for (int i = 0; i < ergo_example_count(); ++i) {
      if (example_name == ergo_example_name(i)) config_text = ergo_example_config(i);
    }
    if (config_text.empty()) {
      std::cerr << "unknown example: " << example_name << "\n";
      return 2;
    }
  } else if (!config_path.empty()) {
    config_text = slurp(config_path);
  } else {
    std::cerr << "either --config or --example is required\n";
    return 2;
  }

  if (!delta.empty()) params["delta"] = delta;
  if (!eps.empty()) params["eps"] = eps;
  if (!rho.empty()) params["rho"] = rho;
  if (nmax > 0) params["nmax"] = nmax;
  if (nlo > 0) params["n_lo"] = nlo;
  if (nmax > 0 && app.got_subcommand(c_gibbs)) params["n_hi"] = nmax;
  if (tmax > 0) params["t_max"] = tmax;
  if (!m_list.empty()) params["m_list"] = m_list;
  if (app.got_subcommand(c_gibbs)) {
    params["measure"] = measure;
    params["core_m"] = coreM;
  }
  if (app.got_subcommand(c_ldp)) {
    params["symbol"] = sym;
    params["relation"] = relation;
    params["theta"] = theta;
    if (nmax > 0) params["nmax"] = nmax;
  }
  if (app.got_subcommand(c_glue)) {
    params["segments"] = segments;
    params["tau"] = tau;
  }
  if (app.got_subcommand(c_decompose)) params["word"] = decompose_word;

  std::string sub;
  for (auto* cmd : {c_pressure, c_certify, c_gibbs, c_entropy, c_flow, c_ldp, c_glue,
                    c_decompose})
    if (app.got_subcommand(cmd)) sub = cmd->get_name();

  return run_and_write(config_text, sub, params, out_path);
}

#include "ergolab/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>

#include "ergolab/entropy.hpp"
#include "ergolab/ldp.hpp"
#include "ergolab/pressure.hpp"

namespace ergolab {

const char* const ergolab_version = "0.1.0";

namespace {

json require(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key))
    throw config_error("missing field " + path + "." + key);
  return j.at(key);
}

dyadic_scale scale_param(const json& j, const std::string& key, int fallback_m) {
  if (!j.contains(key)) return dyadic_scale(fallback_m);
  const auto& v = j.at(key);
  if (v.is_number_integer()) return dyadic_scale(v.get<int>());
  return dyadic_scale::parse(v.get<std::string>());
}

shift_system parse_system(const json& j) {
  int k = j.value("alphabet", 2);
  std::string rule = require(j, "rule", "system").get<std::string>();
  if (rule == "full") return shift_system(alphabet(k), admissibility_rule::full());
  if (rule == "sft") {
    auto rows = require(j, "matrix", "system").get<std::vector<std::vector<int>>>();
    return shift_system(alphabet(k), admissibility_rule::sft(rows));
  }
  if (rule == "beta") {
    word digits = parse_word(require(j, "digits", "system").get<std::string>(), k);
    bool periodic = j.value("periodic", true);
    int depth = j.value("depth", 64);
    return shift_system(alphabet(k), admissibility_rule::beta(digits, periodic, depth));
  }
  if (rule == "sgap") {
    auto gaps = require(j, "gaps", "system").get<std::vector<int>>();
    int cap = j.value("cap", 48);
    return shift_system(alphabet(k),
                        admissibility_rule::sgap(std::set<int>(gaps.begin(), gaps.end()), cap));
  }
  throw config_error("unknown system.rule: " + rule);
}

potential parse_potential(const json& j, const shift_system& sys) {
  std::string type = j.value("type", "zero");
  if (type == "zero") return potential::zero();
  if (type == "constant") return potential::constant(require(j, "value", "potential").get<double>());
  if (type == "locally_constant") {
    int depth = require(j, "depth", "potential").get<int>();
    std::unordered_map<std::string, double> table;
    json vals = require(j, "values", "potential");
    for (auto& [k, v] : vals.items()) table[k] = v.get<double>();
    auto phi = potential::locally_constant(depth, std::move(table));
    phi.validate(sys);
    return phi;
  }
  if (type == "holder") {
    int radius = require(j, "radius", "potential").get<int>();
    std::unordered_map<std::string, double> table;
    json vals = require(j, "values", "potential");
    for (auto& [k, v] : vals.items()) table[k] = v.get<double>();
    auto phi = potential::holder(radius, std::move(table),
                                 require(j, "c", "potential").get<double>(),
                                 require(j, "alpha", "potential").get<double>());
    phi.validate(sys);
    return phi;
  }
  throw config_error("unknown potential.type: " + type);
}

decomposition_rule parse_rule(const json& j) {
  std::string type = j.value("type", "trivial");
  if (type == "trivial") return decomposition_rule::trivial();
  if (type == "beta_suffix") return decomposition_rule::beta_suffix();
  if (type == "table") {
    std::unordered_map<std::string, std::pair<int, int>> entries;
    json ents = require(j, "entries", "decomposition");
    for (auto& [k, v] : ents.items())
      entries[k] = {v.at(0).get<int>(), v.at(1).get<int>()};
    return decomposition_rule::table(std::move(entries));
  }
  throw config_error("unknown decomposition.type: " + type);
}

roof_function parse_roof(const json& j) {
  roof_function roof;
  roof.depth = j.value("depth", 1);
  json vals = require(j, "values", "roof");
  for (auto& [k, v] : vals.items())
    roof.table[k] = rational::parse(v.get<std::string>());
  return roof;
}

std::string timestamp_now() {
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json interval_json(const interval& v) { return json{{"lo", v.lo}, {"hi", v.hi}}; }

markov_measure resolve_markov(const experiment_config& cfg) {
  if (cfg.bernoulli_p) return markov_measure::bernoulli(cfg.sys, *cfg.bernoulli_p);
  return rpf_solve(cfg.sys, cfg.phi).measure;
}

shift_measure resolve_measure(const experiment_config& cfg, const json& params) {
  std::string kind = params.value("measure", "rpf");
  if (kind == "rpf") return shift_measure::of(rpf_solve(cfg.sys, cfg.phi).measure);
  if (kind == "bernoulli") {
    if (!cfg.bernoulli_p) throw config_error("config has no bernoulli parameters");
    return shift_measure::of(markov_measure::bernoulli(cfg.sys, *cfg.bernoulli_p));
  }
  if (kind.rfind("empirical:", 0) == 0) {
    int n = std::stoi(kind.substr(10));
    int depth = params.value("measure_depth", std::min(n, cfg.n_max) + 2 * cfg.m_rho());
    auto mu = empirical_equilibrium(cfg.sys, cfg.phi, dyadic_scale(cfg.m_rho_prime()), n,
                                    std::min(depth, n), cfg.node_budget);
    return shift_measure::of(mu);
  }
  throw config_error("unknown measure spec: " + kind);
}

// ---------------------------------------------------------------------------
// subcommand handlers

void run_pressure(const experiment_config& cfg, const json& params, run_report& rep) {
  dyadic_scale delta = scale_param(params, "delta", 1);
  dyadic_scale eps = scale_param(params, "eps", delta.m);
  int n_max = params.value("nmax", cfg.n_max);
  auto est = pressure(cfg.sys, segment_collection::everything(), cfg.phi, delta, eps, n_max,
                      cfg.node_budget);

  rep.body["pressure"] = {{"value", est.value},
                          {"ratio_spread", est.ratio_spread},
                          {"bounded_support", est.bounded_support},
                          {"monotone_tail", est.ratios_monotone_tail},
                          {"n_max", n_max},
                          {"delta", delta.str()},
                          {"eps", eps.str()}};
  std::ostringstream csv;
  csv << "n,log_lambda_lo,log_lambda_hi,class_count\n";
  for (const auto& s : est.sums)
    csv << s.n << "," << s.log_value.lo << "," << s.log_value.hi << "," << s.class_count
        << "\n";
  rep.tables["pressure"] = csv.str();

  rep.pass = true;
  if (cfg.phi.is_locally_constant()) {
    auto sol = rpf_solve(cfg.sys, cfg.phi);
    rep.body["pressure"]["oracle"] = sol.pressure;
    rep.body["pressure"]["oracle_exact"] = sol.block_encoding_exact;
    double gap = std::abs(est.value - sol.pressure);
    rep.body["pressure"]["oracle_gap"] = gap;
    if (sol.block_encoding_exact) rep.pass = gap <= 1e-6;
  }
}

void run_certify(const experiment_config& cfg, const json& params, run_report& rep) {
  dyadic_scale delta = scale_param(params, "delta", cfg.m_delta);
  dyadic_scale eps = scale_param(params, "eps", cfg.m_eps);
  std::vector<int> M_list = params.value("m_list", std::vector<int>{0, 1});
  int n_max = params.value("nmax", cfg.n_max);
  auto cert = hypothesis_certificate(cfg.sys, cfg.phi, cfg.rule, delta, eps, M_list, n_max,
                                     cfg.node_budget);
  json spec = json::array();
  for (const auto& e : cert.spec)
    spec.push_back({{"M", e.M},
                    {"N_M", e.N_M},
                    {"max_gap", e.max_gap},
                    {"tuples", e.tuples},
                    {"pass", e.pass}});
  json km = json::array();
  for (auto& [M, k] : cert.K_M) km.push_back({{"M", M}, {"K_M", k}});
  rep.body["certificate"] = {{"m_delta", cert.m_delta},
                             {"m_eps", cert.m_eps},
                             {"oracle_pressure", cert.oracle_pressure},
                             {"oracle_exact", cert.oracle_exact},
                             {"estimate_pressure", cert.estimate_pressure},
                             {"specification", spec},
                             {"bowen_K", interval_json(cert.bowen_K)},
                             {"bowen_K_analytic", cert.bowen_K_analytic},
                             {"K_M", km},
                             {"var_eps", interval_json(cert.var_eps)},
                             {"var_15delta", interval_json(cert.var_15delta)},
                             {"ps_pressure", cert.ps_pressure},
                             {"ps_bounded_support", cert.ps_bounded},
                             {"ps_ratio_spread", cert.ps_spread},
                             {"expansive_at_eps", cert.expansive_at_eps},
                             {"margin_iii", cert.margin_iii},
                             {"margin_iii_sharp", cert.margin_iii_sharp},
                             {"pass_i", cert.pass_i},
                             {"pass_ii", cert.pass_ii},
                             {"pass_iii", cert.pass_iii},
                             {"pass", cert.pass}};
  rep.pass = cert.pass;
}

void run_gibbs(const experiment_config& cfg, const json& params, run_report& rep) {
  dyadic_scale rho = scale_param(params, "rho", cfg.m_rho());
  int n_lo = params.value("n_lo", 1);
  int n_hi = params.value("n_hi", std::min(cfg.n_max, 14));
  auto mu = resolve_measure(cfg, params);
  double P;
  if (cfg.phi.is_locally_constant()) P = rpf_solve(cfg.sys, cfg.phi).pressure;
  else
    P = pressure(cfg.sys, segment_collection::everything(), cfg.phi, dyadic_scale(1),
                 dyadic_scale(1), std::min(cfg.n_max, 14), cfg.node_budget)
            .value;

  int M = params.value("core_m", 0);
  auto domain = cfg.rule.good_core(cfg.sys, M);
  auto lower = gibbs_lower_check(cfg.sys, cfg.phi, domain, rho, n_lo, n_hi, mu, P,
                                 cfg.node_budget);
  auto upper = gibbs_upper_check(cfg.sys, cfg.phi, dyadic_scale(cfg.m_gamma()), n_lo, n_hi,
                                 mu, P, cfg.node_budget);

  auto rows_json = [](const gibbs_report& g) {
    json rows = json::array();
    for (const auto& r : g.rows)
      rows.push_back({{"n", r.n},
                      {"min_ratio", r.min_ratio},
                      {"max_ratio", r.max_ratio},
                      {"segments", r.segments}});
    return rows;
  };
  rep.body["gibbs"] = {{"measure", mu.name},
                       {"pressure", P},
                       {"lower", {{"rows", rows_json(lower)},
                                  {"q_lower", lower.fitted_q_lower},
                                  {"positive", lower.positive},
                                  {"no_decay_trend", lower.no_decay_trend}}},
                       {"upper", {{"rows", rows_json(upper)},
                                  {"q_upper", upper.fitted_q_upper}}}};
  std::ostringstream csv;
  csv << "n,lower_min,lower_max,upper_min,upper_max\n";
  for (size_t i = 0; i < lower.rows.size() && i < upper.rows.size(); ++i)
    csv << lower.rows[i].n << "," << lower.rows[i].min_ratio << "," << lower.rows[i].max_ratio
        << "," << upper.rows[i].min_ratio << "," << upper.rows[i].max_ratio << "\n";
  rep.tables["gibbs"] = csv.str();
  rep.pass = lower.positive && lower.no_decay_trend && upper.fitted_q_upper < 1e6;
}

void run_entropy(const experiment_config& cfg, const json& params, run_report& rep) {
  dyadic_scale eps = scale_param(params, "eps", cfg.m_eps);
  int n_max = params.value("nmax", std::min(cfg.n_max, 14));
  int radius = params.value("partition_radius", std::max(0, eps.m - 1));
  markov_measure mu = resolve_markov(cfg);
  auto rep_aee = aee_check(cfg.sys, mu, eps, radius, n_max, params.value("tolerance", 1e-3),
                           cfg.node_budget);
  auto cond = conditional_entropy(cfg.sys, shift_measure::of(mu), 1, 2,
                                  std::min(n_max, 8), cfg.node_budget);
  rep.body["entropy"] = {{"h_oracle", rep_aee.h_oracle},
                         {"h_partition", rep_aee.h_partition},
                         {"h_star", rep_aee.h_star_eps},
                         {"inequality_holds", rep_aee.inequality_holds},
                         {"equality_regime", rep_aee.equality_regime},
                         {"gap", rep_aee.gap},
                         {"conditional", {{"h_base", cond.h_base},
                                          {"h_joint", cond.h_joint},
                                          {"value", cond.conditional},
                                          {"chain_residual", cond.chain_residual}}},
                         {"ne_mass", ne_mass(cfg.sys, shift_measure::of(mu), eps)}};
  rep.pass = rep_aee.inequality_holds && cond.chain_residual < 1e-9;
}

void run_flow_pressure(const experiment_config& cfg, const json& params, run_report& rep) {
  if (!cfg.roof) throw config_error("flow-pressure needs a roof in the config");
  suspension_flow f(cfg.sys, *cfg.roof);
  dyadic_scale delta = scale_param(params, "delta", 1);
  dyadic_scale eps = scale_param(params, "eps", delta.m);
  int t_max = params.value("t_max", cfg.t_max);
  rational step(1, 4 << delta.m); // grid = delta / 4

  std::vector<int> ts;
  for (int t = 5; t <= t_max; t += 5) ts.push_back(t);
  if (ts.empty()) ts.push_back(t_max);
  auto est = flow_pressure(f, flow_collection::everything(), cfg.phi, delta, eps, ts, step,
                           cfg.node_budget);
  double oracle = flow_pressure_root(f, cfg.phi);

  markov_measure mu = resolve_markov(cfg);
  auto ab = abramov_check(f, mu, {1, 2, 3}, cfg.node_budget);

  json sums = json::array();
  for (auto& [t, l] : est.log_sums) sums.push_back({{"t", t}, {"log_lambda", l}});
  rep.body["flow"] = {{"estimate", est.value},
                      {"oracle", oracle},
                      {"gap", std::abs(est.value - oracle)},
                      {"log_sums", sums},
                      {"abramov", {{"flow_entropy", ab.oracle_flow_entropy},
                                   {"root_pressure", ab.root_pressure},
                                   {"slope", ab.slope},
                                   {"h1", ab.h1_estimate},
                                   {"linear_within", ab.linear_within},
                                   {"below_topological", ab.below_topological},
                                   {"family_attains", ab.family_attains}}}};
  std::ostringstream csv;
  csv << "t,log_lambda\n";
  for (auto& [t, l] : est.log_sums) csv << t << "," << l << "\n";
  rep.tables["flow_pressure"] = csv.str();
  rep.pass = std::abs(est.value - oracle) <= 5e-2 && ab.below_topological && ab.linear_within;
}

void run_ldp(const experiment_config& cfg, const json& params, run_report& rep) {
  symbol s = static_cast<symbol>(params.value("symbol", 1));
  std::string relname = params.value("relation", "ge");
  auto rel = relname == "ge"   ? constraint_set::relation::ge
             : relname == "le" ? constraint_set::relation::le
                               : constraint_set::relation::eq;
  double theta = params.value("theta", 0.75);
  int n_max = params.value("nmax", 40);
  auto A = constraint_set::symbol_freq(s, rel, theta);

  markov_measure mu = resolve_markov(cfg);
  double P = rpf_solve(cfg.sys, cfg.phi).pressure;
  auto rep_ldp = ldp_upper_check(cfg.sys, cfg.phi, mu, A, n_max, P, cfg.node_budget);
  auto rep_uef = upper_energy_check(cfg.sys, cfg.phi, shift_measure::of(mu),
                                    dyadic_scale(cfg.m_gamma()), std::min(cfg.n_max, 14), P,
                                    cfg.node_budget);

  json rows = json::array();
  for (const auto& r : rep_ldp.decay.rows)
    rows.push_back({{"n", r.n}, {"rate", r.infeasible ? json(nullptr) : json(r.value)}});
  rep.body["ldp"] = {{"constraint", A.describe()},
                     {"bound", rep_ldp.bound},
                     {"slack_c", rep_ldp.slack_c},
                     {"final_margin", rep_ldp.final_margin},
                     {"decay", rows},
                     {"pass", rep_ldp.pass},
                     {"upper_energy_pass", rep_uef.pass},
                     {"upper_energy_q", rep_uef.fitted_q}};
  std::ostringstream csv;
  csv << "n,rate\n";
  for (const auto& r : rep_ldp.decay.rows)
    csv << r.n << "," << (r.infeasible ? std::string("-inf") : std::to_string(r.value)) << "\n";
  rep.tables["ldp"] = csv.str();
  rep.pass = rep_ldp.pass && rep_uef.pass;
}

void run_glue(const experiment_config& cfg, const json& params, run_report& rep) {
  dyadic_scale delta = scale_param(params, "delta", 1);
  int tau = params.value("tau", 4);
  std::vector<word> segs;
  for (const auto& s : require(params, "segments", "params"))
    segs.push_back(parse_word(s.get<std::string>(), cfg.sys.alpha.size));
  auto res = glue_words(cfg.sys, segs, delta, tau, cfg.node_budget);
  json gaps = json::array();
  for (int g : res.gaps) gaps.push_back(g);
  long lo = -delta.m, hi = 0;
  for (size_t i = 0; i < segs.size(); ++i)
    hi = std::max(hi, res.offsets[i] + static_cast<long>(segs[i].size()));
  auto win = res.y.window(static_cast<int>(lo), static_cast<int>(hi + delta.m));
  rep.body["glue"] = {{"orbit_window", word_str(win.syms)},
                      {"window_start", win.start},
                      {"gaps", gaps},
                      {"max_gap", res.max_gap},
                      {"verified", res.verified}};
  rep.pass = res.verified;
}

void run_decompose(const experiment_config& cfg, const json& params, run_report& rep) {
  word w = parse_word(require(params, "word", "params").get<std::string>(),
                      cfg.sys.alpha.size);
  auto sp = cfg.rule.decompose(cfg.sys, w);
  rep.body["decompose"] = {{"word", word_str(w)}, {"p", sp.p}, {"g", sp.g},
                           {"s", sp.s},           {"p_ok", sp.p_ok}, {"g_ok", sp.g_ok},
                           {"s_ok", sp.s_ok}};
  rep.pass = sp.verified();
}

void run_examples(run_report& rep) {
  json list = json::array();
  for (const auto& e : examples_catalog())
    list.push_back({{"name", e.name}, {"description", e.description}});
  rep.body["examples"] = list;
  rep.pass = true;
}

} // namespace

experiment_config parse_config(const std::string& config_text) {
  json j;
  try {
    j = json::parse(config_text);
  } catch (const std::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config must be a JSON object");
  int version = j.value("version", 1);
  if (version != 1) throw config_error("unsupported config version");

  experiment_config cfg{
      .name = j.value("name", "unnamed"),
      .description = j.value("description", ""),
      .sys = parse_system(require(j, "system", "config")),
  };
  try {
    if (j.contains("potential")) cfg.phi = parse_potential(j.at("potential"), cfg.sys);
    if (j.contains("decomposition")) cfg.rule = parse_rule(j.at("decomposition"));
    if (j.contains("roof")) {
      cfg.roof = parse_roof(j.at("roof"));
      cfg.roof->validate(cfg.sys);
    }
    if (j.contains("measure") && j.at("measure").value("type", "") == "bernoulli")
      cfg.bernoulli_p = j.at("measure").at("p").get<std::vector<double>>();
    if (j.contains("scales")) {
      cfg.m_delta = j.at("scales").value("m_delta", 7);
      cfg.m_eps = j.at("scales").value("m_eps", 1);
    }
    if (cfg.m_delta < cfg.m_eps + 6)
      throw config_error("scale ladder violates eps > 40 delta: need m_delta >= m_eps + 6");
    if (j.contains("budgets")) {
      cfg.node_budget = j.at("budgets").value("nodes", shift_system::default_budget);
      cfg.n_max = j.at("budgets").value("n_max", 16);
      cfg.t_max = j.at("budgets").value("t_max", 12);
    }
    cfg.seed = j.value("seed", 1);
    if (j.contains("run")) {
      cfg.default_subcommand = j.at("run").value("subcommand", "pressure");
      cfg.default_params = j.at("run").value("params", json::object());
    }
  } catch (const json::exception& e) {
    throw config_error(std::string("config field error: ") + e.what());
  }
  if (const char* env = std::getenv("ERGOLAB_BUDGET")) {
    try {
      cfg.node_budget = std::stoull(env);
    } catch (...) {
      throw config_error("ERGOLAB_BUDGET must be an integer");
    }
  }
  cfg.raw = j;
  return cfg;
}

std::string config_hash(const json& canonical) {
  std::string s = canonical.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << "fnv1a-" << std::hex << h;
  return out.str();
}

run_report run_experiment(const experiment_config& cfg, const std::string& subcommand,
                          const json& params) {
  run_report rep;
  rep.body = json::object();
  try {
    if (subcommand == "pressure") run_pressure(cfg, params, rep);
    else if (subcommand == "certify") run_certify(cfg, params, rep);
    else if (subcommand == "gibbs") run_gibbs(cfg, params, rep);
    else if (subcommand == "entropy") run_entropy(cfg, params, rep);
    else if (subcommand == "flow-pressure") run_flow_pressure(cfg, params, rep);
    else if (subcommand == "ldp") run_ldp(cfg, params, rep);
    else if (subcommand == "glue") run_glue(cfg, params, rep);
    else if (subcommand == "decompose") run_decompose(cfg, params, rep);
    else if (subcommand == "examples") run_examples(rep);
    else throw config_error("unknown subcommand: " + subcommand);
    rep.exit_code = rep.pass ? 0 : 1;
  } catch (const budget_error& e) {
    rep.body["error"] = e.what();
    rep.pass = false;
    rep.exit_code = 3;
  } catch (const config_error& e) {
    rep.body["error"] = e.what();
    rep.pass = false;
    rep.exit_code = 2;
  }

  rep.body["config"] = {{"name", cfg.name}, {"subcommand", subcommand}, {"params", params}};
  rep.body["verdict"] = rep.pass ? "pass" : "fail";
  rep.envelope = {{"tool", "ergolab"},
                  {"version", ergolab_version},
                  {"config_hash", config_hash(cfg.raw)},
                  {"timestamp", timestamp_now()},
                  {"exit_code", rep.exit_code}};
  return rep;
}

} // namespace ergolab

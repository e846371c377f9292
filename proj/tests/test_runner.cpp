#include <cmath>

#include "doctest.h"
#include "ergolab/runner.hpp"
#include "test_helpers.hpp"

using namespace ergolab;

namespace {

// a config is deterministic when two runs give byte-identical bodies
std::string body_of(const std::string& config_text) {
  auto cfg = parse_config(config_text);
  auto rep = run_experiment(cfg, cfg.default_subcommand, cfg.default_params);
  return rep.body.dump();
}

} // namespace

TEST_CASE("config parsing and validation") {
  auto cfg = parse_config(R"({
    "version": 1, "name": "t",
    "system": {"alphabet": 2, "rule": "sft", "matrix": [[1,1],[1,0]]},
    "potential": {"type": "zero"},
    "scales": {"m_delta": 8, "m_eps": 2}
  })");
  CHECK(cfg.sys.rule.kind() == rule_kind::sft);
  CHECK(cfg.m_rho() == 5);
  CHECK(cfg.m_rho_prime() == 6);

  // missing system
  CHECK_THROWS_AS(parse_config(R"({"version": 1})"), config_error);
  // malformed JSON
  CHECK_THROWS_AS(parse_config("{nope"), config_error);
  // scale-ladder violation: eps > 40 delta fails
  CHECK_THROWS_AS(parse_config(R"({
    "version": 1,
    "system": {"alphabet": 2, "rule": "full"},
    "scales": {"m_delta": 5, "m_eps": 1}
  })"), config_error);
  // missing roof for flow runs
  auto noroof = parse_config(R"({
    "version": 1, "system": {"alphabet": 2, "rule": "full"}
  })");
  auto rep = run_experiment(noroof, "flow-pressure", json::object());
  CHECK(rep.exit_code == 2);
}

TEST_CASE("unknown subcommands are config errors") {
  auto cfg = parse_config(R"({"version":1,"system":{"alphabet":2,"rule":"full"}})");
  auto rep = run_experiment(cfg, "frobnicate", json::object());
  CHECK(rep.exit_code == 2);
  CHECK(!rep.pass);
}

TEST_CASE("examples catalog: at least six entries, all valid, deterministic") {
  const auto& cat = examples_catalog();
  CHECK(cat.size() >= 6);
  for (const auto& e : cat) {
    CAPTURE(e.name);
    CHECK_NOTHROW(parse_config(e.config_text));
    auto cfg = parse_config(e.config_text);
    CHECK(cfg.name == e.name);
  }
}

TEST_CASE("pressure subcommand reports the oracle gap") {
  const auto& cat = examples_catalog();
  std::string cfg_text;
  for (const auto& e : cat)
    if (e.name == "golden-sft-pressure") cfg_text = e.config_text;
  auto cfg = parse_config(cfg_text);
  auto rep = run_experiment(cfg, cfg.default_subcommand, cfg.default_params);
  CHECK(rep.pass);
  CHECK(rep.exit_code == 0);
  double v = rep.body["pressure"]["value"].get<double>();
  CHECK(v == doctest::Approx(0.4812118).epsilon(1e-6));
  CHECK(rep.tables.count("pressure") == 1);
}

TEST_CASE("determinism: repeated runs produce byte-identical bodies") {
  for (const std::string name : {"full2-pressure", "full2-trivial-certify", "bernoulli-ldp"}) {
    std::string cfg_text;
    for (const auto& e : examples_catalog())
      if (e.name == name) cfg_text = e.config_text;
    CAPTURE(name);
    CHECK(body_of(cfg_text) == body_of(cfg_text));
  }
}

TEST_CASE("config hash is stable across formatting") {
  auto a = parse_config(R"({"version":1,"system":{"alphabet":2,"rule":"full"}})");
  auto b = parse_config("{\n  \"system\": {\"rule\": \"full\", \"alphabet\": 2},\n  \"version\": 1\n}");
  CHECK(config_hash(a.raw) == config_hash(b.raw));
}

TEST_CASE("glue and decompose subcommands") {
  auto cfg = parse_config(R"({
    "version": 1,
    "system": {"alphabet": 2, "rule": "sft", "matrix": [[1,1],[1,0]]}
  })");
  json params{{"segments", {"1", "1"}}, {"delta", "2^-1"}, {"tau", 1}};
  auto rep = run_experiment(cfg, "glue", params);
  CHECK(rep.pass);
  CHECK(rep.body["glue"]["gaps"][0].get<int>() == 1);

  auto beta = parse_config(R"({
    "version": 1,
    "system": {"alphabet": 2, "rule": "beta", "digits": "10", "periodic": true, "depth": 64},
    "decomposition": {"type": "beta_suffix"}
  })");
  auto rep2 = run_experiment(beta, "decompose", json{{"word", "10010"}});
  CHECK(rep2.pass);
  CHECK(rep2.body["decompose"]["s"].get<int>() == 2);
  CHECK(rep2.body["decompose"]["g"].get<int>() == 3);
}

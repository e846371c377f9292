#include <cstring>
#include <string>

#include "doctest.h"
#include "ergolab/ergolab.h"

namespace {

constexpr const char* kGoldenConfig = R"({
  "version": 1,
  "name": "capi-golden",
  "system": {"alphabet": 2, "rule": "sft", "matrix": [[1, 1], [1, 0]]},
  "potential": {"type": "zero"},
  "budgets": {"n_max": 16},
  "run": {"subcommand": "pressure", "params": {"delta": "2^-1", "eps": "2^-1", "nmax": 16}}
})";

} // namespace

TEST_CASE("version string") {
  CHECK(std::string(ergo_version()) == "0.1.0");
}

TEST_CASE("experiment lifecycle through the C surface") {
  ergo_experiment* e = nullptr;
  REQUIRE(ergo_experiment_create(kGoldenConfig, &e) == ERGO_OK);
  CHECK(ergo_experiment_run(e, nullptr, nullptr) == ERGO_OK);
  std::string body = ergo_experiment_body(e);
  CHECK(body.find("\"pressure\"") != std::string::npos);
  CHECK(body.find("0.4812") != std::string::npos);
  CHECK(ergo_experiment_table_count(e) == 1);
  CHECK(std::string(ergo_experiment_table_name(e, 0)) == "pressure");
  std::string csv = ergo_experiment_table_csv(e, "pressure");
  CHECK(csv.rfind("n,log_lambda_lo", 0) == 0);
  ergo_experiment_destroy(e);
}

TEST_CASE("determinism through the C surface") {
  std::string first, second;
  for (int round = 0; round < 2; ++round) {
    ergo_experiment* e = nullptr;
    REQUIRE(ergo_experiment_create(kGoldenConfig, &e) == ERGO_OK);
    REQUIRE(ergo_experiment_run(e, "pressure", "{}") == ERGO_OK);
    (round == 0 ? first : second) = ergo_experiment_body(e);
    ergo_experiment_destroy(e);
  }
  CHECK(first == second);
}

TEST_CASE("config errors surface as status codes with messages") {
  ergo_experiment* e = nullptr;
  CHECK(ergo_experiment_create("{\"version\": 1}", &e) == ERGO_CONFIG_ERROR);
  CHECK(std::strlen(ergo_experiment_error(e)) > 0);
  ergo_experiment_destroy(e);

  // malformed config: missing roof for a flow run
  ergo_experiment* f = nullptr;
  REQUIRE(ergo_experiment_create(kGoldenConfig, &f) == ERGO_OK);
  CHECK(ergo_experiment_run(f, "flow-pressure", "{}") == ERGO_CONFIG_ERROR);
  ergo_experiment_destroy(f);

  ergo_experiment_destroy(nullptr); // must be safe
}

TEST_CASE("budget exhaustion is a distinct status") {
  ergo_experiment* e = nullptr;
  const char* tiny = R"({
    "version": 1,
    "system": {"alphabet": 2, "rule": "full"},
    "budgets": {"nodes": 50, "n_max": 16},
    "run": {"subcommand": "pressure", "params": {"nmax": 16}}
  })";
  REQUIRE(ergo_experiment_create(tiny, &e) == ERGO_OK);
  CHECK(ergo_experiment_run(e, nullptr, nullptr) == ERGO_BUDGET_EXCEEDED);
  ergo_experiment_destroy(e);
}

TEST_CASE("example catalog through the C surface") {
  int n = ergo_example_count();
  CHECK(n >= 6);
  for (int i = 0; i < n; ++i) {
    CHECK(std::strlen(ergo_example_name(i)) > 0);
    CHECK(std::strlen(ergo_example_description(i)) > 0);
    ergo_experiment* e = nullptr;
    CHECK(ergo_experiment_create(ergo_example_config(i), &e) == ERGO_OK);
    ergo_experiment_destroy(e);
  }
  CHECK(std::string(ergo_example_name(n + 3)) == "");
}

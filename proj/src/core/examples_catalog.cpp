#include "ergolab/runner.hpp"

namespace ergolab {

// Shipped example configurations, embedded so the CLI finds them regardless
// of the working directory.  Each runs well inside the desk-scale budget.
const std::vector<example_entry>& examples_catalog() {
  static const std::vector<example_entry> catalog = {
      {"full2-pressure", "full 2-shift, zero potential: pressure is log 2 at every order",
       R"({
  "version": 1,
  "name": "full2-pressure",
  "system": {"alphabet": 2, "rule": "full"},
  "potential": {"type": "zero"},
  "budgets": {"n_max": 20},
  "run": {"subcommand": "pressure", "params": {"delta": "2^-1", "eps": "2^-1", "nmax": 20}}
})"},
      {"golden-sft-pressure",
       "golden-mean SFT (no 11): pressure against the spectral radius of [[1,1],[1,0]]",
       R"({
  "version": 1,
  "name": "golden-sft-pressure",
  "system": {"alphabet": 2, "rule": "sft", "matrix": [[1, 1], [1, 0]]},
  "potential": {"type": "zero"},
  "budgets": {"n_max": 24},
  "run": {"subcommand": "pressure", "params": {"delta": "2^-1", "eps": "2^-1", "nmax": 24}}
})"},
      {"full2-weighted-pressure",
       "full 2-shift with phi(1) = log 2: pressure log 3, equilibrium Bernoulli(1/3, 2/3)",
       R"({
  "version": 1,
  "name": "full2-weighted-pressure",
  "system": {"alphabet": 2, "rule": "full"},
  "potential": {"type": "locally_constant", "depth": 1,
                "values": {"0": 0.0, "1": 0.6931471805599453}},
  "budgets": {"n_max": 18},
  "run": {"subcommand": "pressure", "params": {"delta": "2^-1", "eps": "2^-1", "nmax": 18}}
})"},
      {"golden-beta-certify",
       "golden beta shift with the suffix decomposition: uniqueness hypothesis certificate",
       R"({
  "version": 1,
  "name": "golden-beta-certify",
  "system": {"alphabet": 2, "rule": "beta", "digits": "10", "periodic": true, "depth": 64},
  "potential": {"type": "zero"},
  "decomposition": {"type": "beta_suffix"},
  "scales": {"m_delta": 7, "m_eps": 1},
  "budgets": {"n_max": 12},
  "run": {"subcommand": "certify", "params": {"m_list": [0, 1]}}
})"},
      {"full2-trivial-certify",
       "full 2-shift with the trivial decomposition: every segment is good",
       R"({
  "version": 1,
  "name": "full2-trivial-certify",
  "system": {"alphabet": 2, "rule": "full"},
  "potential": {"type": "zero"},
  "decomposition": {"type": "trivial"},
  "scales": {"m_delta": 7, "m_eps": 1},
  "budgets": {"n_max": 12},
  "run": {"subcommand": "certify", "params": {"m_list": [0, 1]}}
})"},
      {"golden-sft-gibbs",
       "Parry measure of the golden SFT: two-sided Gibbs ratios at the ladder scales",
       R"({
  "version": 1,
  "name": "golden-sft-gibbs",
  "system": {"alphabet": 2, "rule": "sft", "matrix": [[1, 1], [1, 0]]},
  "potential": {"type": "zero"},
  "scales": {"m_delta": 7, "m_eps": 1},
  "budgets": {"n_max": 14},
  "run": {"subcommand": "gibbs", "params": {"measure": "rpf", "rho": "2^-2", "n_lo": 4, "n_hi": 14}}
})"},
      {"full2-entropy",
       "Bernoulli(1/2): partition entropy matches the oracle below the expansivity scale",
       R"({
  "version": 1,
  "name": "full2-entropy",
  "system": {"alphabet": 2, "rule": "full"},
  "potential": {"type": "zero"},
  "measure": {"type": "bernoulli", "p": [0.5, 0.5]},
  "budgets": {"n_max": 12},
  "run": {"subcommand": "entropy", "params": {"eps": "2^-1", "nmax": 12}}
})"},
      {"golden-roof-flow",
       "suspension of the full 2-shift under r(0)=1, r(1)=2: grid pressure vs the root oracle",
       R"({
  "version": 1,
  "name": "golden-roof-flow",
  "system": {"alphabet": 2, "rule": "full"},
  "potential": {"type": "zero"},
  "measure": {"type": "bernoulli", "p": [0.5, 0.5]},
  "roof": {"depth": 1, "values": {"0": "1", "1": "2"}},
  "budgets": {"t_max": 20},
  "run": {"subcommand": "flow-pressure", "params": {"delta": "2^-1", "eps": "2^-1", "t_max": 20}}
})"},
      {"bernoulli-ldp",
       "Bernoulli(1/2), frequency of 1 at least 3/4: exact decay against the Sanov bound",
       R"({
  "version": 1,
  "name": "bernoulli-ldp",
  "system": {"alphabet": 2, "rule": "full"},
  "potential": {"type": "zero"},
  "measure": {"type": "bernoulli", "p": [0.5, 0.5]},
  "budgets": {"n_max": 14},
  "run": {"subcommand": "ldp",
          "params": {"symbol": 1, "relation": "ge", "theta": 0.75, "nmax": 40}}
})"},
      {"sgap-pressure", "S-gap shift with gaps {1, 2}: pressure from the block spectral radius",
       R"({
  "version": 1,
  "name": "sgap-pressure",
  "system": {"alphabet": 2, "rule": "sgap", "gaps": [1, 2], "cap": 48},
  "potential": {"type": "zero"},
  "budgets": {"n_max": 18},
  "run": {"subcommand": "pressure", "params": {"delta": "2^-1", "eps": "2^-1", "nmax": 18}}
})"}};
  return catalog;
}

} // namespace ergolab

#ifndef ERGOLAB_LDP_HPP
#define ERGOLAB_LDP_HPP

#include <optional>
#include <string>
#include <vector>

#include "ergolab/equilibrium.hpp"
#include "ergolab/potential.hpp"

namespace ergolab {

// depth-k cylinder frequencies along an orbit window
cylinder_measure empirical_measure(const shift_system& sys, const point& x, int n, int k);

// Closed convex constraint on depth-1 symbol frequencies.  The variational
// suprema are computed by exponential tilting, which is exact for a single
// active frequency constraint; richer sets fall back to a grid search over
// order-1 chains and are labelled as candidate-class lower bounds.
struct constraint_set {
  enum class relation { ge, le, eq };
  std::string name;
  symbol sym = 1;
  relation rel = relation::ge;
  double theta = 0.5;
  bool everything = false;

  static constraint_set all();
  static constraint_set symbol_freq(symbol s, relation r, double theta);

  bool satisfied(const cylinder_measure& depth1, double tol = 1e-9) const;
  std::string describe() const;
};

struct rate_bound {
  double value = 0.0; // sup h + int phi - P over the constrained class
  markov_measure argmax;
  bool exact_tilt = false; // solved by the dual tilt (single constraint)
  bool feasible = true;
};

rate_bound rate_upper_bound(const shift_system& sys, const potential& phi,
                            const constraint_set& A, double pressure,
                            std::uint64_t budget = shift_system::default_budget);

struct decay_rates {
  struct row {
    int n;
    double value; // (1/n) log mu(E_n^{-1}(A)); -inf when infeasible
    bool infeasible;
  };
  std::vector<row> rows;
};

// exact transfer-matrix computation of mu{x : empirical frequency in A}
decay_rates empirical_decay_rate(const shift_system& sys, const markov_measure& mu,
                                 const constraint_set& A, const std::vector<int>& n_list);

// Monte Carlo fallback for constraint sets without the exact path
decay_rates empirical_decay_rate_mc(const shift_system& sys, const markov_measure& mu,
                                    const constraint_set& A, const std::vector<int>& n_list,
                                    int samples, std::uint64_t seed);

struct upper_energy_report {
  struct row {
    int n;
    double sup;   // sup_x (1/n)(log mu(B_n(x,gamma)) + S_n e_mu(x))
    double bound; // Var(phi, gamma) + log(Q)/n
  };
  std::vector<row> rows;
  double fitted_q = 1.0;
  bool pass = true;
};

upper_energy_report upper_energy_check(const shift_system& sys, const potential& phi,
                                       const shift_measure& mu, const dyadic_scale& gamma,
                                       int n_max, double pressure,
                                       std::uint64_t budget = shift_system::default_budget);

struct ldp_report {
  decay_rates decay;
  double bound = 0.0;
  double slack_c = 0.0; // fitted C in slack(n) = C log n / n
  double final_margin = 0.0;
  bool pass = false;
};

// empirical decay <= variational bound + fitted slack; the slack constant is
// fitted on the first half of the n range and verified on the rest
ldp_report ldp_upper_check(const shift_system& sys, const potential& phi,
                           const markov_measure& mu, const constraint_set& A, int n_max,
                           double pressure,
                           std::uint64_t budget = shift_system::default_budget);

} // namespace ergolab

#endif

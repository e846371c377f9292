#ifndef ERGOLAB_SUSPENSION_HPP
#define ERGOLAB_SUSPENSION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/equilibrium.hpp"
#include "ergolab/interval.hpp"
#include "ergolab/potential.hpp"
#include "ergolab/rational.hpp"
#include "ergolab/shift.hpp"

namespace ergolab {

// strictly positive locally constant roof, exact rational values
struct roof_function {
  int depth = 1;
  std::unordered_map<std::string, rational> table;

  rational value(const word& read) const;
  rational value_at(const point& x, long k) const;
  rational r_min() const;
  rational r_max() const;
  void validate(const shift_system& base) const;

  static roof_function constant(const rational& r);
};

struct suspension_flow {
  shift_system base;
  roof_function roof;

  suspension_flow(shift_system b, roof_function r) : base(std::move(b)), roof(std::move(r)) {
    roof.validate(base);
  }
};

struct flow_point {
  point base;
  rational height; // 0 <= height < roof(base)
};

// time-t map, exact rational arithmetic; throws when |t| exceeds the
// crossing horizon
flow_point flow(const suspension_flow& f, flow_point p, rational t, int max_crossings = 4096);

// flow-space metric: max(d_base(x,y), |s-u|/r_min) minimized over the chart
// representatives within one roof crossing
double flow_metric(const suspension_flow& f, const flow_point& p, const flow_point& q,
                   int horizon = 24);

struct flow_distance {
  double value = 0.0;      // grid maximum: a certified lower bound on the sup
  double correction = 0.0; // modulus-based upper allowance for off-grid times
};

// sup over s in [0, t] of the flow metric along the two orbits, sampled on
// the grid {0, step, 2 step, ..., t}
flow_distance flow_d_t(const suspension_flow& f, const flow_point& p, const flow_point& q,
                       const rational& t, const rational& step, int horizon = 24);

struct ball_identity_report {
  int samples = 0;
  int disagreements = 0;
  bool pass = false;
};

// B_{nt}(x, eps; F) = B_n(x, eps; f_t) with the d_t metric on the map side,
// verified on sampled pairs at grid resolution
ball_identity_report time_t_ball_check(const suspension_flow& f, const dyadic_scale& eps, int n,
                                       const rational& t, const rational& step, int samples,
                                       std::uint64_t seed);

// Flow orbit-segment collection, decidable on (base word from the given
// start offset, exact rational duration, start height).
struct flow_collection {
  std::string name;
  // contains(x-window, height, duration): the window must cover whatever the
  // predicate reads
  std::function<bool(const suspension_flow&, const point&, const rational&, const rational&)>
      pred;

  bool is_all() const { return !pred; }
  static flow_collection everything() { return {"all", nullptr}; }
  static flow_collection nothing();
  static flow_collection duration_window(rational a, rational b);
  // segments starting at height 0 whose base word lies in the given set and
  // whose duration is exactly the word's roof sum
  static flow_collection word_lift(segment_collection base_words, int max_len);
};

// [C] = {(x,n) : (f_{-s} x, n+s+t) in C for some s,t in [0,1]}, decided by
// quantifier elimination over the roof-crossing configurations
bool bracket_contains(const suspension_flow& f, const flow_collection& C, const point& x,
                      const rational& height, int n);

struct flow_partition_value {
  interval log_value;
  std::uint64_t candidates = 0;
  std::uint64_t selected = 0;
  bool exact_pairwise = false; // full pairwise greedy (small candidate sets)
  std::uint64_t cross_checks = 0;
  std::uint64_t cross_violations = 0;
  double t = 0.0;
};

// Two-scale partition sum at integer duration n over a bracket collection:
// candidates are (covering word, grid height) pairs, greedily separated at
// scale delta in the flow metric.
flow_partition_value flow_partition_sum(const suspension_flow& f, const flow_collection& C,
                                        const potential& phi, const dyadic_scale& delta,
                                        const dyadic_scale& eps, int n, const rational& step,
                                        std::uint64_t budget = shift_system::default_budget);

struct flow_pressure_estimate {
  std::vector<std::pair<int, double>> log_sums; // (t, log Lambda)
  std::vector<std::pair<int, double>> slopes;   // consecutive normalized slopes
  double value = 0.0;                           // final slope
  bool bounded_support = false;
};

flow_pressure_estimate flow_pressure(const suspension_flow& f, const flow_collection& C,
                                     const potential& phi, const dyadic_scale& delta,
                                     const dyadic_scale& eps, const std::vector<int>& t_list,
                                     const rational& step,
                                     std::uint64_t budget = shift_system::default_budget);

// oracle: the unique c with P_base(phi * r - c * r) = 0, by bisection
double flow_pressure_root(const suspension_flow& f, const potential& phi,
                          double tol = 1e-10);

struct abramov_report {
  double oracle_flow_entropy = 0.0; // h_base / int r dmu
  double root_pressure = 0.0;       // flow topological pressure at phi = 0
  std::vector<std::pair<int, double>> h_t; // t -> time-t entropy estimate
  double slope = 0.0;               // least-squares slope of h_t vs t
  double h1_estimate = 0.0;
  bool linear_within = false;       // slope within 3% of h1
  bool below_topological = false;   // flow entropy <= root pressure
  std::optional<double> family_max; // sup of h/int r over the Bernoulli family
  bool family_attains = false;      // family max within 1e-4 of the root
};

abramov_report abramov_check(const suspension_flow& f, const markov_measure& base_measure,
                             const std::vector<int>& t_list,
                             std::uint64_t budget = shift_system::default_budget);

// seam-aware variation of a base potential lifted to the suspension
double flow_variation(const suspension_flow& f, const potential& phi, const dyadic_scale& eps,
                      std::uint64_t budget = shift_system::default_budget);

struct flow_certificate {
  double oracle_pressure = 0.0;
  double bracket_ps_pressure = 0.0;
  bool bracket_ps_bounded = false;
  double var_eps = 0.0;
  double margin = 0.0; // oracle - P([P]u[S], delta) - Var(phi, eps)
  bool pass = false;
};

// flow-side hypothesis report: pressure gap for the bracketed prefix and
// suffix collections of a lifted decomposition
flow_certificate flow_hypothesis_report(const suspension_flow& f, const potential& phi,
                                        const flow_collection& bracket_ps,
                                        const dyadic_scale& delta, const dyadic_scale& eps,
                                        int n_max,
                                        std::uint64_t budget = shift_system::default_budget);

} // namespace ergolab

#endif

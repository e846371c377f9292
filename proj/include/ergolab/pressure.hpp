#ifndef ERGOLAB_PRESSURE_HPP
#define ERGOLAB_PRESSURE_HPP

#include <optional>
#include <vector>

#include "ergolab/collections.hpp"
#include "ergolab/interval.hpp"
#include "ergolab/potential.hpp"

namespace ergolab {

// Two-scale partition sum Lambda(C, phi, delta, eps, n).  eps = nullopt is
// the one-scale sum Lambda(C, phi, delta, n) with weights e^{Phi_0}.
//
// At dyadic delta the d_n <= delta classes are window cylinders, so the
// supremum over separated sets is an exact finite sum: one weight per
// admissible window word whose segment coordinates satisfy C, the weight
// being the Birkhoff-sum sup over the class at the weight scale.
struct partition_sum_value {
  interval log_value;            // log Lambda; -inf when C_n is empty
  std::uint64_t class_count = 0; // separation classes meeting C
  bool zero_weights = false;     // every weight is exactly 1: Lambda = class_count
  int n = 0;
  int m_delta = 0;
  std::optional<int> m_eps;

  bool empty() const { return class_count == 0; }
};

partition_sum_value partition_sum(const shift_system& sys, const segment_collection& C,
                                  const potential& phi, const dyadic_scale& delta,
                                  std::optional<dyadic_scale> eps, int n,
                                  std::uint64_t budget = shift_system::default_budget);

// sup of the Birkhoff sum over all points agreeing with `cls` on the
// constraint window (free elsewhere); the class weight in the two-scale sums
interval phi_sup_on_class(const shift_system& sys, const potential& phi,
                          const window_word& cls, int n, const coord_window& constraint,
                          std::uint64_t budget = shift_system::default_budget);

// Growth-rate estimate via consecutive ratios log Lambda(n+1) - log Lambda(n).
struct pressure_estimate {
  std::vector<partition_sum_value> sums; // n = 1..n_max
  std::vector<double> ratios;            // midpoint ratios where defined
  double value = 0.0;                    // mean of the last <=5 ratios
  double ratio_spread = 0.0;             // max-min over those
  bool ratios_monotone_tail = true;      // convergence diagnostic
  // collection supported on boundedly many lengths: reported as pressure 0
  bool bounded_support = false;
};

pressure_estimate pressure(const shift_system& sys, const segment_collection& C,
                           const potential& phi, const dyadic_scale& delta,
                           std::optional<dyadic_scale> eps, int n_max,
                           std::uint64_t budget = shift_system::default_budget);

// Lambda(X, 2g, n_1+...+n_k) <= prod_j Lambda(X, g, g, n_j), per splitting
struct product_bound_report {
  struct row {
    std::vector<int> split;
    interval lhs_log;
    interval rhs_log;
    double slack; // rhs.lo - lhs.hi, certified when >= 0
    bool certified;
  };
  std::vector<row> rows;
  bool all_certified = true;
};

product_bound_report product_bound_check(const shift_system& sys, const potential& phi,
                                         const dyadic_scale& gamma,
                                         const std::vector<std::vector<int>>& splittings,
                                         std::uint64_t budget = shift_system::default_budget);

// e^{n Var} Lambda(C,delta,eps,n) >= Lambda(C,delta,n) >= e^{-n Var} Lambda(C,delta,eps,n)
struct sandwich_report {
  interval log_two_scale;
  interval log_one_scale;
  interval n_var;
  double upper_slack; // certified margins (>= 0 passes)
  double lower_slack;
  bool certified;
};

sandwich_report sandwich_check(const shift_system& sys, const segment_collection& C,
                               const potential& phi, const dyadic_scale& delta,
                               const dyadic_scale& eps, int n,
                               std::uint64_t budget = shift_system::default_budget);

// Lambda(X, g, g, n) >= e^{n P(phi)} against an external pressure oracle
struct lower_bound_report {
  struct row {
    int n;
    interval log_lambda;
    double required; // n * oracle_P
    double margin;   // log_lambda.lo - required
  };
  std::vector<row> rows;
  double min_margin = 0.0;
  bool pass = true; // min margin >= -tolerance
};

lower_bound_report lower_bound_check(const shift_system& sys, const potential& phi,
                                     const dyadic_scale& gamma, int n_max, double oracle_P,
                                     double tolerance = 1e-9,
                                     std::uint64_t budget = shift_system::default_budget);

} // namespace ergolab

#endif

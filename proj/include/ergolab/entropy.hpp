#ifndef ERGOLAB_ENTROPY_HPP
#define ERGOLAB_ENTROPY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ergolab/equilibrium.hpp"
#include "ergolab/shift.hpp"

namespace ergolab {

// The infinite two-sided Bowen set Gamma_eps(x) truncated at horizon N: the
// window words matching x closely enough that d(sigma^n x, sigma^n y) <= eps
// for |n| <= N.  For eps < 1 the shift is expansive and the descriptor pins
// every coordinate of the window; eps >= 1 degenerates to the whole space.
struct gamma_descriptor {
  int horizon = 0;
  int eps_m = 0;
  coord_window window{0, 0};
  bool exact = false;      // the horizon already determines Gamma_eps = {x}
  bool degenerate = false; // eps >= 1: whole space
  std::uint64_t member_count = 1;
};

gamma_descriptor gamma_set(const shift_system& sys, const point& x, const dyadic_scale& eps,
                           int horizon);

// mu(NE(eps)): mass of the non-expansive set
double ne_mass(const shift_system& sys, const shift_measure& mu, const dyadic_scale& eps);

// essential sup of the entropies h(Gamma_eps(x)): 0 below scale 1, h_top at
// the degenerate scale
double h_star(const shift_system& sys, const dyadic_scale& eps);

// H(B^n v A^n) - H(A^n) from exact cylinder masses, where A and B are the
// cylinder partitions reading [0, a_depth) and [0, b_depth)
struct conditional_entropy_report {
  double h_joint;       // H((A v B)^n)
  double h_base;        // H(A^n)
  double conditional;   // difference
  double chain_residual; // |H(AvB)^n - H(A^n) - H(B^n|A^n)| recomputed directly
};

conditional_entropy_report conditional_entropy(const shift_system& sys, const shift_measure& mu,
                                               int a_depth, int b_depth, int n,
                                               std::uint64_t budget = shift_system::default_budget);

struct entropy_estimate {
  std::vector<double> plug_in;    // H(A^n)/n
  std::vector<double> increments; // H(A^{n+1}) - H(A^n)
  double value = 0.0;             // last increment
  bool subadditive = true;        // H(A^n) subadditivity diagnostic
};

// plug-in entropy of the window partition of the given radius
entropy_estimate partition_entropy(const shift_system& sys, const shift_measure& mu, int radius,
                                   int n_max, std::uint64_t budget = shift_system::default_budget);

struct aee_report {
  double h_oracle;   // h_mu(f) from the Markov oracle
  double h_partition; // plug-in h_mu(f, A)
  double h_star_eps;
  bool inequality_holds; // h_mu(f) <= h_mu(f,A) + h*
  bool equality_regime;  // eps < 1: |h_mu(f,A) - h_mu(f)| within tolerance
  double gap;
};

// h_mu(f) <= h_mu(f, A) + h*(mu, eps) for a partition of diameter <= eps
aee_report aee_check(const shift_system& sys, const markov_measure& mu, const dyadic_scale& eps,
                     int partition_radius, int n_max, double tolerance = 1e-3,
                     std::uint64_t budget = shift_system::default_budget);

struct hamming_report {
  std::uint64_t pairs = 0;
  std::uint64_t coding_mismatches = 0; // pairs with d_n^H > beta n
  std::uint64_t counterexamples = 0;   // among those, pairs with d_n <= 2 delta
  bool pass = true;
};

// exhaustive check over word pairs: d_n^H(x,y) > beta n implies d_n > 2 delta
// (cylinder partitions of the given depth define the codings)
hamming_report hamming_check(const shift_system& sys, int b_depth, const dyadic_scale& delta,
                             double beta, int n, std::uint64_t budget = shift_system::default_budget);

struct stirling_report {
  struct row {
    int n;
    double beta;
    // exact sum_{j <= beta n} C(n, j) against e^{(-beta log beta) n}
    double sum;      // exact, represented in double (n <= 120)
    double bound;    // e^{(-beta log beta) n}
    double required_k;
  };
  std::vector<row> rows;
  std::vector<std::pair<double, double>> fitted_k; // per beta
  bool verified_with_fitted = true; // sum <= K_fit * bound for every n
  bool binomials_exact = true;      // Pascal recurrence and row-sum identity
};

stirling_report stirling_bound_check(int n_max, const std::vector<double>& beta_list);

struct adapted_partition_descriptor {
  int n = 0;
  int gamma_m = 0;
  coord_window window{0, 0};
  std::uint64_t elements = 0;
  bool inner_ball_contained = true; // B_n(x, gamma/2) inside each element
  bool outer_ball_contains = true;  // element inside closed B_n(x, gamma)
  bool disjoint_cover = true;
};

// window-cylinder partition adapted to the maximal (n, gamma)-separated set
adapted_partition_descriptor adapted_partition(const shift_system& sys, int n,
                                               const dyadic_scale& gamma,
                                               std::uint64_t budget = shift_system::default_budget);

} // namespace ergolab

#endif

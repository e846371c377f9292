#ifndef ERGOLAB_EQUILIBRIUM_HPP
#define ERGOLAB_EQUILIBRIUM_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/collections.hpp"
#include "ergolab/interval.hpp"
#include "ergolab/potential.hpp"
#include "ergolab/pressure.hpp"

namespace ergolab {

// depth-k marginal of a shift-invariant (or empirical) measure
struct cylinder_measure {
  int depth = 0;
  std::vector<word> words;    // admissible depth-words, lexicographic
  std::vector<double> masses; // aligned with words

  double total() const;
  double mass_of(const word& w) const; // 0 when absent
  cylinder_measure marginal_front(int k) const; // sum over trailing symbols
  cylinder_measure marginal_back(int k) const;  // sum over leading symbols
  // max TV distance between the two depth-(k-1) marginals
  double shift_defect() const;
  void validate(double tol = 1e-12) const;
};

// total variation distance between depth-k marginals
double weak_star_distance(const cylinder_measure& a, const cylinder_measure& b, int k);

// stationary Markov measure on L-block states, projected to the shift
struct markov_measure {
  shift_system sys;
  int block_len = 1;
  std::vector<word> states; // admissible L-words, lexicographic
  std::vector<std::vector<double>> trans;
  std::vector<double> pi;
  std::string name;

  double cylinder_mass(const word& w) const;
  cylinder_measure marginal(int depth, std::uint64_t budget = shift_system::default_budget) const;
  interval integral(const potential& phi,
                    std::uint64_t budget = shift_system::default_budget) const;
  void validate(double tol = 1e-9) const;

  static markov_measure bernoulli(const shift_system& full_sys, std::vector<double> p);
  // stationary chain given by a transition matrix on symbols
  static markov_measure from_transitions(const shift_system& sys,
                                         std::vector<std::vector<double>> P);
};

// -sum_i pi_i sum_j P_ij log P_ij
double markov_entropy(const markov_measure& m);

// uniform access to cylinder masses for the gibbs checks
struct shift_measure {
  std::string name;
  int max_depth = 0; // 0 = unlimited
  std::function<double(const word&)> mass;

  static shift_measure of(const markov_measure& m);
  static shift_measure of(const cylinder_measure& m);
};

// Ruelle-Perron-Frobenius data for an SFT-like system with a locally
// constant potential, via power iteration on the weighted block graph.
struct rpf_solution {
  double lambda = 0.0;
  double pressure = 0.0; // log lambda
  int block_len = 1;
  std::vector<double> right; // Bv = lambda v
  std::vector<double> left;  // uB = lambda u
  markov_measure measure;    // P_ij = B_ij v_j / (lambda v_i), pi_i ~ u_i v_i
  double residual_right = 0.0;
  double residual_left = 0.0;
  bool spectral_gap_ok = true;    // flagged when a second eigenvalue is within 1e-6
  bool block_encoding_exact = true; // language cross-check (beta rules)
};

rpf_solution rpf_solve(const shift_system& sys, const potential& phi,
                       std::optional<int> block_len = std::nullopt);

// topological entropy oracle: rpf pressure of phi = 0
double entropy_oracle(const shift_system& sys);

// depth-k marginal of mu_n = (1/n) sum_i (f^i)_* nu_n where nu_n weights a
// maximizing (n, rho')-separated set by e^{Phi_0}
cylinder_measure empirical_equilibrium(const shift_system& sys, const potential& phi,
                                       const dyadic_scale& rho_prime, int n, int k,
                                       std::uint64_t budget = shift_system::default_budget);

struct gibbs_report {
  struct row {
    int n;
    double min_ratio;
    double max_ratio;
    std::uint64_t segments;
  };
  std::vector<row> rows;
  double fitted_q_lower = 0.0; // inf over all (x,n)
  double fitted_q_upper = 0.0; // sup over all (x,n)
  bool positive = false;       // inf > 0
  bool no_decay_trend = true;  // per-n inf not monotonically collapsing
};

// mu(closed B_n(x,rho)) * e^{n P - Phi_0(x,n)} over segments of `domain`
gibbs_report gibbs_lower_check(const shift_system& sys, const potential& phi,
                               const segment_collection& domain, const dyadic_scale& rho,
                               int n_lo, int n_hi, const shift_measure& mu, double pressure,
                               std::uint64_t budget = shift_system::default_budget);

// mu(closed B_n(x,gamma)) * e^{n P - Phi_gamma(x,n)} over all segments,
// with the closed-ball sup in the exponent
gibbs_report gibbs_upper_check(const shift_system& sys, const potential& phi,
                               const dyadic_scale& gamma, int n_lo, int n_hi,
                               const shift_measure& mu, double pressure,
                               std::uint64_t budget = shift_system::default_budget);

struct variational_report {
  struct row {
    std::string name;
    double entropy;
    interval integral;
    double free_energy; // h + int phi
    double defect;      // P - free energy
    bool attains;       // defect within tolerance
  };
  std::vector<row> rows;
  bool all_below = true;
  double tolerance = 1e-9;
};

variational_report variational_check(const shift_system& sys, const potential& phi,
                                     const std::vector<markov_measure>& candidates,
                                     double pressure, double tolerance = 1e-9);

} // namespace ergolab

#endif

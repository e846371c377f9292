#ifndef ERGOLAB_DECOMPOSITION_HPP
#define ERGOLAB_DECOMPOSITION_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ergolab/collections.hpp"
#include "ergolab/interval.hpp"
#include "ergolab/potential.hpp"
#include "ergolab/shift.hpp"

namespace ergolab {

// Orbit-segment decomposition rule: assigns (p, g, s) with p+g+s = n to each
// segment word, together with the membership predicates of the three
// collections.
class decomposition_rule {
public:
  enum class kind { trivial, beta_suffix, table };

  static decomposition_rule trivial();
  // prefix empty, suffix = maximal suffix that is a prefix of the beta
  // expansion of 1 (requires a beta system)
  static decomposition_rule beta_suffix();
  // explicit table word -> (p, s); words absent from the table are outside
  // the domain D
  static decomposition_rule table(std::unordered_map<std::string, std::pair<int, int>> entries);

  kind variant() const { return kind_; }

  struct split {
    int p = 0, g = 0, s = 0;
    bool p_ok = false, g_ok = false, s_ok = false;
    bool verified() const { return p_ok && g_ok && s_ok; }
  };

  // throws domain_error when (x, n) lies outside the rule's domain D
  split decompose(const shift_system& sys, const word& core) const;

  bool in_prefix_collection(const shift_system& sys, const word& w) const;
  bool in_good_collection(const shift_system& sys, const word& w) const;
  bool in_suffix_collection(const shift_system& sys, const word& w) const;

  segment_collection prefix_collection(const shift_system& sys) const;
  segment_collection suffix_collection(const shift_system& sys) const;
  segment_collection good_collection(const shift_system& sys) const;
  segment_collection prefix_union_suffix(const shift_system& sys) const;
  // G^M: p <= M and s <= M
  segment_collection good_core(const shift_system& sys, int M) const;

  std::string name() const;

private:
  kind kind_ = kind::trivial;
  std::unordered_map<std::string, std::pair<int, int>> table_;
  // longest suffix of w that is a prefix of the beta digits
  static int beta_suffix_len(const shift_system& sys, const word& w);
};

// Shortest admissible connector per ordered symbol pair, found by breadth
// first search over candidate words; tau is the largest connector length.
struct gluing_spec {
  int tau = 0;
  std::map<std::pair<symbol, symbol>, word> connectors;
  std::vector<std::pair<symbol, symbol>> missing; // pairs with no connector

  bool complete() const { return missing.empty(); }
};

gluing_spec build_gluing_spec(const shift_system& sys, int max_len = 16);

struct glue_segment {
  point x;
  int n = 0;
};

struct glue_result {
  point y;
  std::vector<int> gaps;     // tau_1 .. tau_{k-1}
  std::vector<long> offsets; // shadowing start offset of each segment in y
  int max_gap = 0;
  bool verified = false; // post-verified d_{n_j} < delta for every j
  std::vector<metric_result> shadow_distances;
};

// Constructs an orbit y shadowing the given segments at scale 2^{-m} in the
// closed-ball sense d_{n_j} <= 2^{-m} (agreement on [-(m-1), n_j-1+(m-1)];
// at m = 1 the blocks are the bare words and concatenation is verbatim).
// Junctions take the smallest gap, then the lexicographically smallest
// filling, consistent with the overlapping windows; gap j depends only on
// segments 1..j+1.  Throws domain_error when no gap <= tau_limit works.
glue_result glue(const shift_system& sys, const std::vector<glue_segment>& segments,
                 const dyadic_scale& delta, int tau_limit,
                 std::uint64_t budget = shift_system::default_budget);

glue_result glue_words(const shift_system& sys, const std::vector<word>& segments,
                       const dyadic_scale& delta, int tau_limit,
                       std::uint64_t budget = shift_system::default_budget);

struct specification_report {
  std::uint64_t tuples_checked = 0;
  std::uint64_t failures = 0;
  int max_gap_seen = 0;
  bool pass = false;
  std::vector<word> failure_witness; // first failing tuple, if any
  std::string failure_reason;
};

// Exhaustive weak-specification check: glue all k-tuples (k <= k_max) of
// collection segments with lengths in [1, n_max] and verify the shadowing
// inequality verbatim at scale delta.
specification_report specification_check(const shift_system& sys,
                                         const segment_collection& C, const dyadic_scale& delta,
                                         int tau_limit, int k_max, int n_max,
                                         std::uint64_t budget = shift_system::default_budget);

// Specification of G^M through the good cores: segments with n >= N(M) =
// 2M + N0 are glued along their cores at scale delta * 2^{-M}, and the full
// segments must then be shadowed at scale delta.
specification_report good_core_specification_check(
    const shift_system& sys, const decomposition_rule& rule, int M, const dyadic_scale& delta,
    int tau_limit, int k_max, int n_span,
    std::uint64_t budget = shift_system::default_budget);

struct distortion_report {
  interval empirical;        // max |Phi_0(x,n) - Phi_0(y,n)| over sampled pairs
  double analytic = 0.0;     // 2 sum_j Var(phi, eps 2^{-j}) upper bound
  bool within_analytic = true;
  std::uint64_t pairs = 0;
  std::vector<std::pair<int, double>> per_n; // n -> max midpoint distortion
};

// Bowen distortion K over a collection at scale eps (open balls)
distortion_report bowen_distortion(const shift_system& sys, const potential& phi,
                                   const segment_collection& C, const dyadic_scale& eps,
                                   int n_max, std::uint64_t budget = shift_system::default_budget);

struct certificate {
  int m_delta = 0, m_eps = 0;
  double oracle_pressure = 0.0;
  bool oracle_exact = true;
  double estimate_pressure = 0.0; // ratio-method cross check

  struct spec_entry {
    int M;
    int N_M;
    int max_gap;
    std::uint64_t tuples;
    bool pass;
  };
  std::vector<spec_entry> spec;

  interval bowen_K;
  double bowen_K_analytic = 0.0;
  std::vector<std::pair<int, double>> K_M; // K(M) = K + 2 M Var(phi, eps)

  interval var_eps;
  interval var_15delta;
  double ps_pressure = 0.0; // pressure of P u S at scale delta
  bool ps_bounded = false;
  double ps_spread = 0.0;

  bool expansive_at_eps = true; // shifts: every scale below 1

  double margin_iii = 0.0;       // P(phi) - P(PuS,delta) - Var(phi,eps)
  double margin_iii_sharp = 0.0; // P(phi) - P(PuS,delta) - Var(phi,15delta)

  bool pass_i = false, pass_ii = false, pass_iii = false;
  bool pass = false;
};

// Theorem-style hypothesis certificate for (sys, phi, rule) at the dyadic
// ladder m_delta >= m_eps + 6 (epsilon > 40 delta).
certificate hypothesis_certificate(const shift_system& sys, const potential& phi,
                                   const decomposition_rule& rule, const dyadic_scale& delta,
                                   const dyadic_scale& eps, const std::vector<int>& M_list,
                                   int n_max,
                                   std::uint64_t budget = shift_system::default_budget);

struct core_density_report {
  struct row {
    int M;
    int n;
    double ratio; // Lambda(C n G^M) / Lambda(C) at scales (2g, 2g)
  };
  std::vector<row> rows;
  std::optional<int> least_M; // least M with ratio >= 1 - alpha2 across the n range
  bool lambda_all_large = true; // Lambda(C) >= alpha1 e^{nP} held
  std::vector<std::pair<int, double>> upper_G; // n -> Lambda(G,g,g,n) e^{-nP}
  double fitted_C4 = 0.0;
};

core_density_report core_density_check(const shift_system& sys, const potential& phi,
                                       const decomposition_rule& rule, const dyadic_scale& gamma,
                                       double alpha1, double alpha2,
                                       const std::vector<int>& M_ladder, int n_lo, int n_hi,
                                       double oracle_P,
                                       std::uint64_t budget = shift_system::default_budget);

} // namespace ergolab

#endif

#ifndef ERGOLAB_SHIFT_HPP
#define ERGOLAB_SHIFT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ergolab/dyadic.hpp"
#include "ergolab/errors.hpp"

namespace ergolab {

using symbol = std::uint8_t;
using word = std::vector<symbol>;

std::string word_str(const word& w);
word parse_word(const std::string& s, int alphabet_size);

// A finite word pinned to absolute coordinates [start, start + size - 1].
struct window_word {
  int start = 0;
  word syms;

  int lo() const { return start; }
  int hi() const { return start + static_cast<int>(syms.size()) - 1; }
  symbol at(int coord) const { return syms[static_cast<size_t>(coord - start)]; }
  bool covers(int coord) const { return coord >= lo() && coord <= hi(); }
};

struct alphabet {
  int size = 2;
  alphabet() = default;
  explicit alphabet(int k) : size(k) {
    if (k < 2) throw config_error("alphabet size must be >= 2");
    if (k > 64) throw config_error("alphabet size capped at 64");
  }
};

enum class rule_kind { full, sft, beta, sgap };

// Language membership for the four shipped shift classes.  Admissibility is
// position free: it is a property of the word, tested the same at any
// coordinate offset.
class admissibility_rule {
public:
  static admissibility_rule full();
  static admissibility_rule sft(std::vector<std::vector<int>> matrix);
  // quasi-greedy expansion digits of 1; if periodic, the digit block repeats
  // out to truncation_depth.  Words longer than truncation_depth are rejected.
  static admissibility_rule beta(word digits, bool periodic, int truncation_depth);
  static admissibility_rule sgap(std::set<int> gaps, int length_cap);

  rule_kind kind() const { return kind_; }
  const std::vector<std::vector<int>>& matrix() const { return matrix_; }
  const word& beta_digits() const { return beta_digits_; }
  const std::set<int>& gap_set() const { return gaps_; }

  void validate(const alphabet& a) const;

  bool admissible(const word& w) const;

  // words longer than this are rejected outright (beta truncation depth /
  // sgap enumeration cap); 0 means unlimited
  int length_cap() const;

  // left context length that determines how a word may be extended to the
  // right; exact for full/sft/sgap, equals the truncation depth for beta
  int memory_bound() const;

  // L such that the de Bruijn graph on admissible L-words generates exactly
  // this language, when such an L is known; used by the spectral oracle
  std::optional<int> sft_block_length() const;

private:
  rule_kind kind_ = rule_kind::full;
  std::vector<std::vector<int>> matrix_;
  word beta_digits_;
  bool beta_periodic_ = false;
  int beta_depth_ = 0;
  std::set<int> gaps_;
  int sgap_cap_ = 0;
};

// Incremental admissibility for DFS enumeration: push/pop symbols, with
// push returning whether the extended word is still admissible.
class prefix_checker {
public:
  prefix_checker(const admissibility_rule& rule, const alphabet& a);

  bool push(symbol s);
  void pop();
  int size() const { return static_cast<int>(stack_.size()); }
  const word& current() const { return stack_; }

private:
  const admissibility_rule& rule_;
  word stack_;
  // beta: start offsets of suffixes currently equal to a prefix of d*
  std::vector<std::vector<int>> beta_active_;
  // sgap: (run of zeros, seen a one yet) per level
  std::vector<std::pair<int, bool>> sgap_state_;
};

// Finitely described element of the two-sided shift: a central word with
// purely periodic tails on both sides.  origin is the index into the central
// word holding coordinate 0 (may drift outside after shifting; lookups fold
// into the periodic tails).
struct point {
  word left_period;  // repeats leftward of the central word
  word central;
  word right_period; // repeats rightward
  long origin = 0;

  symbol at(long coord) const;
  point shifted(long k) const {
    point p = *this;
    p.origin += k;
    return p;
  }
  window_word window(int lo, int hi) const;
};

// first-difference distance: d(x,y) = 2^{-min{|i| : x_i != y_i}}
struct metric_result {
  bool differs = false; // false: no difference found within the horizon
  int exponent = 0;     // d = 2^{-exponent} when differs
  bool truncated = false;

  double value() const { return differs ? std::ldexp(1.0, -exponent) : 0.0; }
  // sound d <= 2^{-m} / d > 2^{-m} decisions; require horizon >= m scans
  bool le(const dyadic_scale& s) const { return !differs || exponent >= s.m; }
  bool gt(const dyadic_scale& s) const { return differs && exponent < s.m; }
};

struct coord_window {
  int lo = 0;
  int hi = 0;
  int length() const { return hi - lo + 1; }
};

struct shift_system {
  alphabet alpha;
  admissibility_rule rule;

  shift_system() : alpha(2), rule(admissibility_rule::full()) {}
  shift_system(alphabet a, admissibility_rule r) : alpha(a), rule(std::move(r)) {
    rule.validate(alpha);
  }

  bool admissible(const word& w) const { return rule.admissible(w); }

  // exactly the admissible words of length n, lexicographically sorted
  std::vector<word> enumerate_words(int n, std::uint64_t budget = default_budget) const;
  std::uint64_t count_words(int n, std::uint64_t budget = default_budget) const;

  // streaming DFS over admissible words of length n; callback may return
  // false to prune nothing (words are complete when called)
  void for_each_word(int n, const std::function<void(const word&)>& fn,
                     std::uint64_t budget = default_budget) const;

  // deterministic bi-infinite extension of an admissible word
  point canonical_point(const window_word& w) const;
  point canonical_point(const word& w) const { return canonical_point(window_word{0, w}); }

  static constexpr std::uint64_t default_budget = 50'000'000;
};

metric_result metric(const point& x, const point& y, int horizon);
metric_result bowen_dn(const point& x, const point& y, int n, int horizon);

// coordinate window on which agreement is equivalent to d_n(x,y) <= 2^{-m};
// m = 0 (the whole space) is rejected as degenerate
coord_window ball_window(int n, const dyadic_scale& scale);

// window for the open ball d_n < 2^{-m} (one dyadic step tighter)
inline coord_window open_ball_window(int n, const dyadic_scale& scale) {
  return ball_window(n, dyadic_scale(scale.m + 1));
}

// Maximal-cardinality (n,delta)-separated set of representatives for the
// word class selected by `pred` (null = all words).  Representatives are the
// admissible words on ball_window(n, delta), lexicographically sorted: at
// dyadic scales the d_n <= delta classes are exactly these window cylinders.
std::vector<window_word> separated_set(
    const shift_system& sys, const std::function<bool(const word&)>& pred, int n,
    const dyadic_scale& delta, std::uint64_t budget = shift_system::default_budget);

// Enumerate admissible words on [lo, hi], clamped to `fixed` wherever it
// covers a coordinate.  Used for Bowen-ball sups: the fixed part is the ball
// constraint, the rest ranges over admissible completions.
void for_each_constrained(const shift_system& sys, int lo, int hi, const window_word& fixed,
                          const std::function<void(const window_word&)>& fn,
                          std::uint64_t budget = shift_system::default_budget);

} // namespace ergolab

#endif

#include "ergolab/shift.hpp"

#include <algorithm>

namespace ergolab {

std::string word_str(const word& w) {
  std::string s;
  s.reserve(w.size());
  for (symbol c : w) {
    if (c < 10) s.push_back(static_cast<char>('0' + c));
    else s.push_back(static_cast<char>('a' + (c - 10)));
  }
  return s;
}

word parse_word(const std::string& s, int alphabet_size) {
  word w;
  w.reserve(s.size());
  for (char c : s) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'z') v = 10 + (c - 'a');
    else throw config_error(std::string("bad symbol '") + c + "' in word " + s);
    if (v >= alphabet_size)
      throw config_error("symbol out of range in word " + s);
    w.push_back(static_cast<symbol>(v));
  }
  return w;
}

// ---------------------------------------------------------------------------
// admissibility rules

admissibility_rule admissibility_rule::full() {
  admissibility_rule r;
  r.kind_ = rule_kind::full;
  return r;
}

admissibility_rule admissibility_rule::sft(std::vector<std::vector<int>> matrix) {
  admissibility_rule r;
  r.kind_ = rule_kind::sft;
  r.matrix_ = std::move(matrix);
  return r;
}

admissibility_rule admissibility_rule::beta(word digits, bool periodic, int truncation_depth) {
  admissibility_rule r;
  r.kind_ = rule_kind::beta;
  r.beta_periodic_ = periodic;
  r.beta_depth_ = truncation_depth;
  if (digits.empty()) throw config_error("beta rule needs at least one digit");
  if (truncation_depth < static_cast<int>(digits.size()) && !periodic)
    throw config_error("beta truncation depth shorter than digit string");
  // unroll d* out to the truncation depth once
  r.beta_digits_.reserve(static_cast<size_t>(truncation_depth));
  for (int i = 0; i < truncation_depth; ++i) {
    if (periodic) r.beta_digits_.push_back(digits[static_cast<size_t>(i) % digits.size()]);
    else if (i < static_cast<int>(digits.size())) r.beta_digits_.push_back(digits[static_cast<size_t>(i)]);
  }
  return r;
}

admissibility_rule admissibility_rule::sgap(std::set<int> gaps, int length_cap) {
  admissibility_rule r;
  r.kind_ = rule_kind::sgap;
  r.gaps_ = std::move(gaps);
  r.sgap_cap_ = length_cap;
  return r;
}

void admissibility_rule::validate(const alphabet& a) const {
  switch (kind_) {
    case rule_kind::full:
      return;
    case rule_kind::sft: {
      int k = a.size;
      if (static_cast<int>(matrix_.size()) != k)
        throw config_error("SFT matrix must be k x k");
      std::vector<int> colsum(static_cast<size_t>(k), 0);
      for (int i = 0; i < k; ++i) {
        if (static_cast<int>(matrix_[static_cast<size_t>(i)].size()) != k)
          throw config_error("SFT matrix must be k x k");
        int rowsum = 0;
        for (int j = 0; j < k; ++j) {
          int v = matrix_[static_cast<size_t>(i)][static_cast<size_t>(j)];
          if (v != 0 && v != 1) throw config_error("SFT matrix entries must be 0/1");
          rowsum += v;
          colsum[static_cast<size_t>(j)] += v;
        }
        if (rowsum == 0) throw config_error("SFT matrix has an all-zero row");
      }
      for (int j = 0; j < k; ++j)
        if (colsum[static_cast<size_t>(j)] == 0)
          throw config_error("SFT matrix has an all-zero column");
      return;
    }
    case rule_kind::beta: {
      for (symbol d : beta_digits_)
        if (d >= a.size) throw config_error("beta digit out of alphabet range");
      if (beta_digits_.empty() || beta_digits_[0] == 0)
        throw config_error("beta expansion must start with a positive digit");
      // quasi-greedy validity: d* must dominate all its shifts (up to depth)
      int n = static_cast<int>(beta_digits_.size());
      for (int s = 1; s < n; ++s) {
        for (int i = 0; s + i < n; ++i) {
          if (beta_digits_[static_cast<size_t>(s + i)] > beta_digits_[static_cast<size_t>(i)])
            throw config_error("beta digits are not their own lexicographic maximum");
          if (beta_digits_[static_cast<size_t>(s + i)] < beta_digits_[static_cast<size_t>(i)]) break;
        }
      }
      return;
    }
    case rule_kind::sgap: {
      if (a.size != 2) throw config_error("S-gap shift requires alphabet {0,1}");
      if (gaps_.empty()) throw config_error("S-gap set must be nonempty");
      for (int g : gaps_)
        if (g < 0) throw config_error("S-gap lengths must be >= 0");
      if (sgap_cap_ <= 0) throw config_error("S-gap rule needs a positive length cap");
      return;
    }
  }
}

int admissibility_rule::length_cap() const {
  if (kind_ == rule_kind::beta) return beta_depth_;
  if (kind_ == rule_kind::sgap) return sgap_cap_;
  return 0;
}

int admissibility_rule::memory_bound() const {
  switch (kind_) {
    case rule_kind::full: return 0;
    case rule_kind::sft: return 1;
    case rule_kind::sgap: return *gaps_.rbegin() + 1;
    case rule_kind::beta: return beta_depth_;
  }
  return 0;
}

std::optional<int> admissibility_rule::sft_block_length() const {
  switch (kind_) {
    case rule_kind::full:
    case rule_kind::sft: return 1;
    case rule_kind::sgap: return *gaps_.rbegin() + 1;
    case rule_kind::beta: return std::nullopt; // caller must cross-check
  }
  return std::nullopt;
}

bool admissibility_rule::admissible(const word& w) const {
  int cap = length_cap();
  if (cap > 0 && static_cast<int>(w.size()) > cap)
    throw config_error("word length " + std::to_string(w.size()) +
                       " exceeds the rule's length cap " + std::to_string(cap));
  switch (kind_) {
    case rule_kind::full:
      return true;
    case rule_kind::sft: {
      for (size_t i = 0; i + 1 < w.size(); ++i)
        if (!matrix_[w[i]][w[i + 1]]) return false;
      return true;
    }
    case rule_kind::beta: {
      // every suffix must be lexicographically <= d*
      int n = static_cast<int>(w.size());
      for (int s = 0; s < n; ++s) {
        for (int i = 0; s + i < n; ++i) {
          symbol d = beta_digits_[static_cast<size_t>(i)];
          if (w[static_cast<size_t>(s + i)] > d) return false;
          if (w[static_cast<size_t>(s + i)] < d) break;
        }
      }
      return true;
    }
    case rule_kind::sgap: {
      int max_gap = *gaps_.rbegin();
      int run = 0;
      bool seen_one = false;
      for (symbol c : w) {
        if (c == 1) {
          if (seen_one && !gaps_.count(run)) return false;
          seen_one = true;
          run = 0;
        } else {
          ++run;
          if (run > max_gap) return false;
        }
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// prefix_checker

prefix_checker::prefix_checker(const admissibility_rule& rule, const alphabet&)
    : rule_(rule) {
  if (rule_.kind() == rule_kind::sgap) sgap_state_.push_back({0, false});
}

bool prefix_checker::push(symbol s) {
  int cap = rule_.length_cap();
  if (cap > 0 && static_cast<int>(stack_.size()) >= cap)
    throw config_error("enumeration exceeds the rule's length cap " + std::to_string(cap));
  switch (rule_.kind()) {
    case rule_kind::full:
      stack_.push_back(s);
      return true;
    case rule_kind::sft: {
      if (!stack_.empty() && !rule_.matrix()[stack_.back()][s]) return false;
      stack_.push_back(s);
      return true;
    }
    case rule_kind::beta: {
      const word& d = rule_.beta_digits();
      // extend every suffix that still matches a prefix of d*
      std::vector<int> next;
      const std::vector<int>* prev = beta_active_.empty() ? nullptr : &beta_active_.back();
      if (prev) {
        for (int start : *prev) {
          int len = static_cast<int>(stack_.size()) - start;
          symbol want = d[static_cast<size_t>(len)];
          if (s > want) return false;
          if (s == want) next.push_back(start);
        }
      }
      // the suffix starting at this position
      if (s > d[0]) return false;
      if (s == d[0]) next.push_back(static_cast<int>(stack_.size()));
      stack_.push_back(s);
      beta_active_.push_back(std::move(next));
      return true;
    }
    case rule_kind::sgap: {
      auto [run, seen] = sgap_state_.back();
      int max_gap = *rule_.gap_set().rbegin();
      if (s == 1) {
        if (seen && !rule_.gap_set().count(run)) return false;
        stack_.push_back(s);
        sgap_state_.push_back({0, true});
      } else {
        if (run + 1 > max_gap) return false;
        stack_.push_back(s);
        sgap_state_.push_back({run + 1, seen});
      }
      return true;
    }
  }
  return false;
}

void prefix_checker::pop() {
  stack_.pop_back();
  if (rule_.kind() == rule_kind::beta) beta_active_.pop_back();
  if (rule_.kind() == rule_kind::sgap) sgap_state_.pop_back();
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

struct dfs_budget {
  std::uint64_t remaining;
  void tick() {
    if (remaining == 0)
      throw budget_error("word enumeration budget exceeded");
    --remaining;
  }
};

void dfs_words(const shift_system& sys, prefix_checker& chk, int n, dfs_budget& bud,
               const std::function<void(const word&)>& fn) {
  if (chk.size() == n) {
    fn(chk.current());
    return;
  }
  for (int s = 0; s < sys.alpha.size; ++s) {
    bud.tick();
    if (chk.push(static_cast<symbol>(s))) {
      dfs_words(sys, chk, n, bud, fn);
      chk.pop();
    }
  }
}

} // namespace

void shift_system::for_each_word(int n, const std::function<void(const word&)>& fn,
                                 std::uint64_t budget) const {
  if (n < 0) throw config_error("word length must be >= 0");
  int cap = rule.length_cap();
  if (cap > 0 && n > cap)
    throw config_error("word length " + std::to_string(n) +
                       " exceeds the rule's length cap " + std::to_string(cap));
  if (n == 0) {
    fn(word{});
    return;
  }
  prefix_checker chk(rule, alpha);
  dfs_budget bud{budget};
  dfs_words(*this, chk, n, bud, fn);
}

std::vector<word> shift_system::enumerate_words(int n, std::uint64_t budget) const {
  std::vector<word> out;
  for_each_word(n, [&](const word& w) { out.push_back(w); }, budget);
  return out; // DFS in symbol order yields lexicographic order
}

std::uint64_t shift_system::count_words(int n, std::uint64_t budget) const {
  std::uint64_t c = 0;
  for_each_word(n, [&](const word&) { ++c; }, budget);
  return c;
}

// ---------------------------------------------------------------------------
// points

symbol point::at(long coord) const {
  long idx = origin + coord;
  long len = static_cast<long>(central.size());
  if (idx >= 0 && idx < len) return central[static_cast<size_t>(idx)];
  if (idx < 0) {
    long p = static_cast<long>(left_period.size());
    long off = ((idx % p) + p) % p;
    return left_period[static_cast<size_t>(off)];
  }
  long p = static_cast<long>(right_period.size());
  long off = (idx - len) % p;
  return right_period[static_cast<size_t>(off)];
}

window_word point::window(int lo, int hi) const {
  window_word w;
  w.start = lo;
  w.syms.reserve(static_cast<size_t>(hi - lo + 1));
  for (int i = lo; i <= hi; ++i) w.syms.push_back(at(i));
  return w;
}

namespace {

// smallest symbol continuing the given left context
symbol greedy_next(const shift_system& sys, const word& context) {
  for (int s = 0; s < sys.alpha.size; ++s) {
    word w = context;
    w.push_back(static_cast<symbol>(s));
    if (sys.admissible(w)) return static_cast<symbol>(s);
  }
  throw domain_error("word admits no right extension");
}

symbol greedy_prev(const shift_system& sys, const word& context) {
  for (int s = 0; s < sys.alpha.size; ++s) {
    word w;
    w.push_back(static_cast<symbol>(s));
    w.insert(w.end(), context.begin(), context.end());
    if (sys.admissible(w)) return static_cast<symbol>(s);
  }
  throw domain_error("word admits no left extension");
}

} // namespace

point shift_system::canonical_point(const window_word& w) const {
  if (!w.syms.empty() && !admissible(w.syms))
    throw domain_error("canonical_point: word not admissible: " + word_str(w.syms));

  // extend greedily with the smallest symbol until the recent context
  // repeats, then take the repeating stretch as the periodic tail
  int mem = std::min(rule.memory_bound(), 12);
  if (rule.kind() == rule_kind::beta) mem = std::min(rule.memory_bound(), 24);
  int probe = std::max(2 * (mem + 1), 4);

  word rightward = w.syms;
  std::vector<word> right_contexts;
  int right_transient = -1, right_period_len = -1;
  for (int i = 0; i < probe * 4 + 64; ++i) {
    word ctx(rightward.end() - std::min<size_t>(rightward.size(), static_cast<size_t>(mem)),
             rightward.end());
    for (int j = 0; j < static_cast<int>(right_contexts.size()); ++j) {
      if (right_contexts[static_cast<size_t>(j)] == ctx) {
        right_transient = j;
        right_period_len = static_cast<int>(right_contexts.size()) - j;
        break;
      }
    }
    if (right_period_len > 0) break;
    right_contexts.push_back(ctx);
    rightward.push_back(greedy_next(*this, ctx));
  }
  if (right_period_len <= 0)
    throw domain_error("canonical extension did not become periodic");

  word leftward = w.syms;
  std::vector<word> left_contexts;
  int left_transient = -1, left_period_len = -1;
  for (int i = 0; i < probe * 4 + 64; ++i) {
    word ctx(leftward.begin(),
             leftward.begin() + std::min<size_t>(leftward.size(), static_cast<size_t>(mem)));
    for (int j = 0; j < static_cast<int>(left_contexts.size()); ++j) {
      if (left_contexts[static_cast<size_t>(j)] == ctx) {
        left_transient = j;
        left_period_len = static_cast<int>(left_contexts.size()) - j;
        break;
      }
    }
    if (left_period_len > 0) break;
    left_contexts.push_back(ctx);
    leftward.insert(leftward.begin(), greedy_prev(*this, ctx));
  }
  if (left_period_len <= 0)
    throw domain_error("canonical extension did not become periodic");

  point p;
  // central = transient extensions on both sides around the original word
  int left_extra = static_cast<int>(leftward.size() - w.syms.size());
  p.central = leftward;
  p.central.insert(p.central.end(), rightward.begin() + static_cast<long>(w.syms.size()),
                   rightward.end());
  p.origin = left_extra - w.start;
  // periodic parts: the symbols added during the detected cycle
  (void)right_transient;
  (void)left_transient;
  p.right_period.assign(rightward.end() - right_period_len, rightward.end());
  p.left_period.assign(leftward.begin(), leftward.begin() + left_period_len);
  if (p.left_period.empty() || p.right_period.empty())
    throw domain_error("canonical extension produced an empty period");
  return p;
}

// ---------------------------------------------------------------------------
// metric structure

metric_result metric(const point& x, const point& y, int horizon) {
  if (horizon < 0) throw config_error("metric horizon must be >= 0");
  metric_result r;
  for (int j = 0; j <= horizon; ++j) {
    if (x.at(j) != y.at(j) || x.at(-j) != y.at(-j)) {
      r.differs = true;
      r.exponent = j;
      return r;
    }
  }
  r.truncated = true;
  return r;
}

metric_result bowen_dn(const point& x, const point& y, int n, int horizon) {
  if (n < 1) throw config_error("d_n needs n >= 1");
  metric_result best;
  best.truncated = true;
  for (int k = 0; k < n; ++k) {
    metric_result d = metric(x.shifted(k), y.shifted(k), horizon);
    if (d.differs && (!best.differs || d.exponent < best.exponent)) {
      best.differs = true;
      best.exponent = d.exponent;
      best.truncated = false;
      if (best.exponent == 0) break;
    }
  }
  return best;
}

coord_window ball_window(int n, const dyadic_scale& scale) {
  if (scale.m == 0)
    throw config_error("scale 1 is degenerate: the Bowen ball is the whole space");
  if (n < 1) throw config_error("ball_window needs n >= 1");
  return coord_window{-(scale.m - 1), n - 1 + (scale.m - 1)};
}

std::vector<window_word> separated_set(const shift_system& sys,
                                       const std::function<bool(const word&)>& pred, int n,
                                       const dyadic_scale& delta, std::uint64_t budget) {
  if (delta.m == 0) throw config_error("separated_set needs delta < 1");
  coord_window W = ball_window(n, delta);
  std::vector<window_word> out;
  sys.for_each_word(W.length(), [&](const word& w) {
    if (pred) {
      // the class predicate reads the segment coordinates [0, n)
      word core(w.begin() + (0 - W.lo), w.begin() + (0 - W.lo) + n);
      if (!pred(core)) return;
    }
    out.push_back(window_word{W.lo, w});
  }, budget);
  return out;
}

namespace {

void dfs_constrained(const shift_system& sys, prefix_checker& chk, int lo, int hi,
                     const window_word& fixed, dfs_budget& bud,
                     const std::function<void(const window_word&)>& fn) {
  int coord = lo + chk.size();
  if (coord > hi) {
    fn(window_word{lo, chk.current()});
    return;
  }
  if (fixed.covers(coord)) {
    bud.tick();
    if (chk.push(fixed.at(coord))) {
      dfs_constrained(sys, chk, lo, hi, fixed, bud, fn);
      chk.pop();
    }
    return;
  }
  for (int s = 0; s < sys.alpha.size; ++s) {
    bud.tick();
    if (chk.push(static_cast<symbol>(s))) {
      dfs_constrained(sys, chk, lo, hi, fixed, bud, fn);
      chk.pop();
    }
  }
}

} // namespace

void for_each_constrained(const shift_system& sys, int lo, int hi, const window_word& fixed,
                          const std::function<void(const window_word&)>& fn,
                          std::uint64_t budget) {
  if (hi < lo) throw config_error("empty enumeration window");
  prefix_checker chk(sys.rule, sys.alpha);
  dfs_budget bud{budget};
  dfs_constrained(sys, chk, lo, hi, fixed, bud, fn);
}

} // namespace ergolab

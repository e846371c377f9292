#include "ergolab/potential.hpp"

#include <algorithm>
#include <cmath>

namespace ergolab {

potential potential::constant(double c) {
  potential p;
  p.kind_ = kind::locally_constant;
  p.depth_ = 0;
  p.table_[""] = c;
  return p;
}

potential potential::locally_constant(int depth, std::unordered_map<std::string, double> table) {
  if (depth < 0) throw config_error("potential depth must be >= 0");
  potential p;
  p.kind_ = kind::locally_constant;
  p.depth_ = depth;
  p.table_ = std::move(table);
  return p;
}

potential potential::holder(int radius, std::unordered_map<std::string, double> table,
                            double holder_c, double holder_alpha) {
  if (radius < 0) throw config_error("holder radius must be >= 0");
  if (holder_c < 0) throw config_error("holder constant must be >= 0");
  if (holder_alpha <= 0 || holder_alpha > 1)
    throw config_error("holder exponent must lie in (0, 1]");
  potential p;
  p.kind_ = kind::holder;
  p.depth_ = radius;
  p.table_ = std::move(table);
  p.holder_c_ = holder_c;
  p.holder_alpha_ = holder_alpha;
  return p;
}

double potential::remainder() const {
  if (kind_ == kind::locally_constant) return 0.0;
  return holder_c_ * std::pow(2.0, -holder_alpha_ * depth_);
}

interval potential::eval(const word& read_word) const {
  auto it = table_.find(word_str(read_word));
  if (it == table_.end())
    throw domain_error("potential table has no entry for word " + word_str(read_word));
  double r = remainder();
  return interval(it->second - r, it->second + r);
}

interval potential::eval_at(const window_word& data, int k) const {
  coord_window rw = read_window();
  word w;
  w.reserve(static_cast<size_t>(rw.length()));
  for (int i = rw.lo; i <= rw.hi; ++i) {
    int coord = k + i;
    if (!data.covers(coord))
      throw domain_error("window data too short for potential evaluation");
    w.push_back(data.at(coord));
  }
  return eval(w);
}

interval potential::eval_at(const point& x, long k) const {
  coord_window rw = read_window();
  word w;
  w.reserve(static_cast<size_t>(rw.length()));
  for (int i = rw.lo; i <= rw.hi; ++i) w.push_back(x.at(k + i));
  return eval(w);
}

interval potential::birkhoff_on(const window_word& data, int n) const {
  interval sum(0.0);
  for (int k = 0; k < n; ++k) sum += eval_at(data, k);
  return sum;
}

double potential::symbol_value(symbol s) const {
  word w;
  if (depth_ >= 1) w.assign(static_cast<size_t>(read_window().length()), s);
  return eval(w).mid();
}

bool potential::is_identically_zero() const {
  for (const auto& [k, v] : table_)
    if (v != 0.0) return false;
  return remainder() == 0.0;
}

double potential::max_abs() const {
  double m = 0.0;
  for (const auto& [k, v] : table_) m = std::max(m, std::abs(v));
  return m + remainder();
}

void potential::validate(const shift_system& sys) const {
  int len = read_window().length();
  if (len == 0) {
    if (!table_.count("")) throw config_error("constant potential needs one entry");
    return;
  }
  sys.for_each_word(len, [&](const word& w) {
    if (!table_.count(word_str(w)))
      throw config_error("potential table missing entry for admissible word " + word_str(w));
  });
}

interval birkhoff_sum(const potential& phi, const point& x, int n) {
  if (n < 0) throw config_error("birkhoff_sum needs n >= 0");
  interval sum(0.0);
  for (int k = 0; k < n; ++k) sum += phi.eval_at(x, k);
  return sum;
}

interval phi_eps(const shift_system& sys, const potential& phi, const point& x, int n,
                 const dyadic_scale& eps, std::uint64_t budget) {
  if (eps.m == 0) throw config_error("phi_eps needs eps < 1");
  if (n < 1) throw config_error("phi_eps needs n >= 1");
  // open ball: d_n < 2^-m  <=>  agreement on ball_window(n, m+1)
  coord_window ball = open_ball_window(n, eps);
  coord_window rw = phi.read_window(n);
  int lo = std::min(ball.lo, rw.lo), hi = std::max(ball.hi, rw.hi);
  window_word fixed = x.window(ball.lo, ball.hi);
  bool any = false;
  interval best(0.0);
  for_each_constrained(sys, lo, hi, fixed, [&](const window_word& z) {
    interval v = phi.birkhoff_on(z, n);
    if (!any) {
      best = v;
      any = true;
    } else {
      best = interval(std::max(best.lo, v.lo), std::max(best.hi, v.hi));
    }
  }, budget);
  if (!any) throw domain_error("phi_eps: no admissible completion of the ball window");
  return best;
}

namespace {

// Var over pairs agreeing on [-radius, radius]; radius < 0 means no
// constraint (all pairs).  Exact for locally constant tables; for holder
// tables the table spread widens by twice the enclosure radius.
interval variation_window(const shift_system& sys, const potential& phi, int radius,
                          std::uint64_t budget) {
  coord_window rw = phi.read_window();
  if (rw.length() == 0) return interval(0.0);
  // pairs must agree on A = [-radius, radius]; phi reads rw
  int lo = radius >= 0 ? std::min(-radius, rw.lo) : rw.lo;
  int hi = radius >= 0 ? std::max(radius, rw.hi) : rw.hi;
  int alo = radius >= 0 ? -radius : 1, ahi = radius >= 0 ? radius : 0; // empty if radius<0

  // locally constant with the read window inside the agreement window: 0
  if (radius >= 0 && rw.lo >= alo && rw.hi <= ahi) {
    if (phi.variant() == potential::kind::locally_constant) return interval(0.0);
    // same table cylinder: only the enclosure remainder is left, and the
    // declared modulus caps it
    double cap = std::min(2 * phi.remainder(),
                          phi.holder_c() * std::pow(2.0, -phi.holder_alpha() * radius));
    return interval(0.0, cap);
  }

  // group read-window words by their restriction to the agreement window,
  // track min/max of the table value per group
  std::unordered_map<std::string, std::pair<double, double>> groups;
  double spread = 0.0;
  for_each_constrained(sys, lo, hi, window_word{0, {}}, [&](const window_word& z) {
    word rword;
    for (int i = rw.lo; i <= rw.hi; ++i) rword.push_back(z.at(i));
    double v = phi.eval(rword).mid();
    std::string key;
    for (int i = alo; i <= ahi; ++i)
      if (z.covers(i)) key.push_back(static_cast<char>('0' + z.at(i)));
    auto [it, inserted] = groups.try_emplace(key, std::make_pair(v, v));
    if (!inserted) {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
    spread = std::max(spread, it->second.second - it->second.first);
  }, budget);

  double r = phi.remainder();
  if (r == 0.0) return interval(spread, spread);
  double up = spread + 2 * r;
  if (radius >= 0)
    up = std::min(up, phi.holder_c() * std::pow(2.0, -phi.holder_alpha() * radius));
  return interval(std::max(0.0, spread - 2 * r), up);
}

} // namespace

interval variation(const shift_system& sys, const potential& phi, const dyadic_scale& eps,
                   std::uint64_t budget) {
  // scale 1 is the whole-space scale: global oscillation
  if (eps.m == 0) return variation_window(sys, phi, -1, budget);
  // d < 2^-m  <=>  agreement on [-m, m]
  return variation_window(sys, phi, eps.m, budget);
}

interval variation_at_multiple(const shift_system& sys, const potential& phi, int c, int m,
                               std::uint64_t budget) {
  if (c < 1) throw config_error("variation multiple must be >= 1");
  // pairs with d < c*2^-m are pairs with d <= 2^-jmin, where 2^-jmin is the
  // largest dyadic value strictly below the threshold; that is agreement on
  // radius jmin - 1
  int jmin;
  if (c == 1) {
    jmin = m + 1;
  } else {
    int L = 0;
    while ((1LL << (L + 1)) < c) ++L;
    // now 2^L < c <= 2^{L+1}, so 2^{m-j} < c  iff  m - j <= L
    jmin = m - L;
  }
  int radius = jmin - 1;
  if (radius < 0) return variation_window(sys, phi, -1, budget);
  return variation_window(sys, phi, radius, budget);
}

interval bowen_series_bound(const shift_system& sys, const potential& phi,
                            const dyadic_scale& eps, std::uint64_t budget) {
  interval total(0.0);
  if (phi.variant() == potential::kind::locally_constant) {
    for (int j = 0; eps.m + j <= phi.depth() + 1; ++j)
      total += variation(sys, phi, dyadic_scale(eps.m + j), budget);
    return total.scaled(2.0);
  }
  int stop = phi.depth(); // beyond the table radius the modulus takes over
  for (int j = 0; eps.m + j < stop; ++j)
    total += variation(sys, phi, dyadic_scale(eps.m + j), budget);
  int j0 = std::max(eps.m, stop);
  double a = phi.holder_alpha();
  double tail = phi.holder_c() * std::pow(2.0, -a * j0) / (1.0 - std::pow(2.0, -a));
  total += interval(0.0, interval::up(tail));
  return total.scaled(2.0);
}

} // namespace ergolab

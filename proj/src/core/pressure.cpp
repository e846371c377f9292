#include "ergolab/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ergolab {

// weight exponent of one separation class: sup over the class (and over the
// eps-ball around it) of the Birkhoff sum.  The sup ranges over admissible
// words agreeing with the class word on the constraint window.
interval phi_sup_on_class(const shift_system& sys, const potential& phi,
                          const window_word& cls, int n, const coord_window& constraint,
                          std::uint64_t budget) {
  coord_window rw = phi.read_window(n);
  // free coordinates: the read window minus the constraint
  if (rw.lo >= constraint.lo && rw.hi <= constraint.hi) {
    // fully pinned: direct evaluation on the class word
    return phi.birkhoff_on(cls, n);
  }
  int lo = std::min(constraint.lo, rw.lo), hi = std::max(constraint.hi, rw.hi);
  window_word fixed;
  fixed.start = constraint.lo;
  fixed.syms.assign(cls.syms.begin() + (constraint.lo - cls.lo()),
                    cls.syms.begin() + (constraint.hi - cls.lo()) + 1);
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
  if (!any) throw domain_error("partition_sum: class admits no admissible completion");
  return best;
}


partition_sum_value partition_sum(const shift_system& sys, const segment_collection& C,
                                  const potential& phi, const dyadic_scale& delta,
                                  std::optional<dyadic_scale> eps, int n,
                                  std::uint64_t budget) {
  if (n < 1) throw config_error("partition_sum needs n >= 1");
  if (delta.m == 0) throw config_error("partition_sum needs delta < 1");

  partition_sum_value out;
  out.n = n;
  out.m_delta = delta.m;
  if (eps) out.m_eps = eps->m;

  coord_window W = ball_window(n, delta);
  // sup over representatives: constraint radius min(m_eps + 1, m_delta);
  // the one-scale sum (eps absent) pins exactly the class window
  int r_eff = eps ? std::min(eps->m + 1, delta.m) : delta.m;
  coord_window constraint = ball_window(n, dyadic_scale(r_eff));

  coord_window rw = phi.read_window(n);
  bool fast = phi.is_locally_constant() && r_eff == delta.m && rw.lo >= W.lo && rw.hi <= W.hi;
  bool zero = phi.is_identically_zero();

  log_sum_acc acc;
  if (fast || zero) {
    // weight computable from the class word alone
    sys.for_each_word(W.length(), [&](const word& w) {
      word core(w.begin() + (0 - W.lo), w.begin() + (0 - W.lo) + n);
      if (!C.contains(core)) return;
      if (zero) {
        acc.add(interval(0.0));
      } else {
        acc.add(phi.birkhoff_on(window_word{W.lo, w}, n));
      }
    }, budget);
  } else {
    // memoize weights by the constraint-window restriction
    std::unordered_map<std::string, interval> memo;
    sys.for_each_word(W.length(), [&](const word& w) {
      word core(w.begin() + (0 - W.lo), w.begin() + (0 - W.lo) + n);
      if (!C.contains(core)) return;
      window_word cls{W.lo, w};
      std::string key(w.begin() + (constraint.lo - W.lo),
                      w.begin() + (constraint.hi - W.lo) + 1);
      auto it = memo.find(key);
      if (it == memo.end())
        it = memo.emplace(key, phi_sup_on_class(sys, phi, cls, n, constraint, budget)).first;
      acc.add(it->second);
    }, budget);
  }

  out.class_count = acc.count();
  out.zero_weights = zero;
  out.log_value = acc.log_value();
  if (zero && out.class_count > 0) {
    // integer class count: tighten to log(count)
    out.log_value = log_point(static_cast<double>(out.class_count));
  }
  return out;
}

pressure_estimate pressure(const shift_system& sys, const segment_collection& C,
                           const potential& phi, const dyadic_scale& delta,
                           std::optional<dyadic_scale> eps, int n_max,
                           std::uint64_t budget) {
  if (n_max < 4) throw config_error("pressure needs n_max >= 4");
  pressure_estimate est;
  est.sums.reserve(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    est.sums.push_back(partition_sum(sys, C, phi, delta, eps, n, budget));

  int last_nonempty = 0;
  for (int i = 0; i < n_max; ++i)
    if (!est.sums[static_cast<size_t>(i)].empty()) last_nonempty = i + 1;
  if (last_nonempty < n_max) {
    // the collection dies out before the horizon: no exponential growth to
    // measure, reported as pressure 0
    est.bounded_support = true;
    est.value = 0.0;
    return est;
  }

  for (int i = 0; i + 1 < n_max; ++i) {
    if (est.sums[static_cast<size_t>(i)].empty()) continue;
    est.ratios.push_back(est.sums[static_cast<size_t>(i + 1)].log_value.mid() -
                         est.sums[static_cast<size_t>(i)].log_value.mid());
  }
  if (est.ratios.empty()) {
    est.bounded_support = true;
    est.value = 0.0;
    return est;
  }

  // windowed slope over the last w steps; an even window cancels the parity
  // oscillation that bounded collections (one word per length, alternating
  // context counts) produce in consecutive ratios
  int w = std::min(4, n_max - 1);
  if (w >= 3 && w % 2 == 1) --w;
  est.value = (est.sums[static_cast<size_t>(n_max - 1)].log_value.mid() -
               est.sums[static_cast<size_t>(n_max - 1 - w)].log_value.mid()) /
              static_cast<double>(w);

  size_t tail = std::min<size_t>(5, est.ratios.size());
  double mn = 1e300, mx = -1e300;
  for (size_t i = est.ratios.size() - tail; i < est.ratios.size(); ++i) {
    mn = std::min(mn, est.ratios[i]);
    mx = std::max(mx, est.ratios[i]);
  }
  est.ratio_spread = mx - mn;

  // diagnostic: the tail ratio sequence should not oscillate
  for (size_t i = est.ratios.size() - tail; i + 2 < est.ratios.size(); ++i) {
    double d1 = est.ratios[i + 1] - est.ratios[i];
    double d2 = est.ratios[i + 2] - est.ratios[i + 1];
    if (d1 * d2 < -1e-18) est.ratios_monotone_tail = false;
  }
  return est;
}

product_bound_report product_bound_check(const shift_system& sys, const potential& phi,
                                         const dyadic_scale& gamma,
                                         const std::vector<std::vector<int>>& splittings,
                                         std::uint64_t budget) {
  if (gamma.m < 1) throw config_error("product_bound_check needs 2*gamma < 1, gamma dyadic");
  dyadic_scale two_gamma(gamma.m - 1);
  if (two_gamma.m == 0)
    throw config_error("product_bound_check needs 2*gamma < 1");

  product_bound_report rep;
  auto all = segment_collection::everything();
  std::unordered_map<int, interval> rhs_cache;
  for (const auto& split : splittings) {
    int total = 0;
    interval rhs(0.0);
    for (int nj : split) {
      if (nj < 1) throw config_error("product_bound_check: parts must be >= 1");
      total += nj;
      auto it = rhs_cache.find(nj);
      if (it == rhs_cache.end()) {
        auto v = partition_sum(sys, all, phi, gamma, gamma, nj, budget);
        it = rhs_cache.emplace(nj, v.log_value).first;
      }
      rhs += it->second;
    }
    auto lhs = partition_sum(sys, all, phi, two_gamma, std::nullopt, total, budget);
    product_bound_report::row row;
    row.split = split;
    row.lhs_log = lhs.log_value;
    row.rhs_log = rhs;
    row.slack = rhs.lo - lhs.log_value.hi;
    row.certified = row.slack >= 0.0;
    rep.all_certified = rep.all_certified && row.certified;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

sandwich_report sandwich_check(const shift_system& sys, const segment_collection& C,
                               const potential& phi, const dyadic_scale& delta,
                               const dyadic_scale& eps, int n, std::uint64_t budget) {
  sandwich_report rep;
  auto two = partition_sum(sys, C, phi, delta, eps, n, budget);
  auto one = partition_sum(sys, C, phi, delta, std::nullopt, n, budget);
  rep.log_two_scale = two.log_value;
  rep.log_one_scale = one.log_value;
  rep.n_var = variation(sys, phi, eps, budget).scaled(static_cast<double>(n));
  if (two.empty() && one.empty()) {
    rep.upper_slack = rep.lower_slack = 0.0;
    rep.certified = true;
    return rep;
  }
  // e^{nVar} L2 >= L1  and  L1 >= e^{-nVar} L2, certified at the endpoints
  // that make the true inequality hardest.  Equality cases land a few ulps
  // under zero because the two enclosures round outward independently.
  rep.upper_slack = (rep.n_var.lo + rep.log_two_scale.lo) - rep.log_one_scale.hi;
  rep.lower_slack = rep.log_one_scale.lo - (rep.log_two_scale.hi - rep.n_var.lo);
  double tol = 1e-10 * std::max({1.0, std::abs(rep.log_one_scale.hi),
                                 std::abs(rep.log_two_scale.hi)});
  rep.certified = rep.upper_slack >= -tol && rep.lower_slack >= -tol;
  return rep;
}

lower_bound_report lower_bound_check(const shift_system& sys, const potential& phi,
                                     const dyadic_scale& gamma, int n_max, double oracle_P,
                                     double tolerance, std::uint64_t budget) {
  lower_bound_report rep;
  rep.min_margin = 1e300;
  auto all = segment_collection::everything();
  for (int n = 1; n <= n_max; ++n) {
    auto v = partition_sum(sys, all, phi, gamma, gamma, n, budget);
    lower_bound_report::row row;
    row.n = n;
    row.log_lambda = v.log_value;
    row.required = static_cast<double>(n) * oracle_P;
    row.margin = v.log_value.lo - row.required;
    rep.min_margin = std::min(rep.min_margin, row.margin);
    rep.rows.push_back(row);
  }
  rep.pass = rep.min_margin >= -tolerance;
  return rep;
}

} // namespace ergolab

#include "ergolab/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "ergolab/equilibrium.hpp"
#include "ergolab/pressure.hpp"

namespace ergolab {

// ---------------------------------------------------------------------------
// decomposition rules

decomposition_rule decomposition_rule::trivial() {
  decomposition_rule r;
  r.kind_ = kind::trivial;
  return r;
}

decomposition_rule decomposition_rule::beta_suffix() {
  decomposition_rule r;
  r.kind_ = kind::beta_suffix;
  return r;
}

decomposition_rule decomposition_rule::table(
    std::unordered_map<std::string, std::pair<int, int>> entries) {
  decomposition_rule r;
  r.kind_ = kind::table;
  r.table_ = std::move(entries);
  return r;
}

std::string decomposition_rule::name() const {
  switch (kind_) {
    case kind::trivial: return "trivial";
    case kind::beta_suffix: return "beta-suffix";
    case kind::table: return "table";
  }
  return "?";
}

int decomposition_rule::beta_suffix_len(const shift_system& sys, const word& w) {
  if (sys.rule.kind() != rule_kind::beta)
    throw config_error("beta-suffix decomposition needs a beta system");
  const word& d = sys.rule.beta_digits();
  int n = static_cast<int>(w.size());
  for (int s = std::min<int>(n, static_cast<int>(d.size())); s >= 1; --s) {
    if (std::equal(w.end() - s, w.end(), d.begin())) return s;
  }
  return 0;
}

decomposition_rule::split decomposition_rule::decompose(const shift_system& sys,
                                                        const word& core) const {
  int n = static_cast<int>(core.size());
  split out;
  switch (kind_) {
    case kind::trivial:
      out.p = 0;
      out.g = n;
      out.s = 0;
      break;
    case kind::beta_suffix: {
      out.s = beta_suffix_len(sys, core);
      out.p = 0;
      out.g = n - out.s;
      break;
    }
    case kind::table: {
      auto it = table_.find(word_str(core));
      if (it == table_.end())
        throw domain_error("segment " + word_str(core) + " lies outside the decomposition domain");
      out.p = it->second.first;
      out.s = it->second.second;
      out.g = n - out.p - out.s;
      if (out.g < 0) throw config_error("table decomposition with p + s > n");
      break;
    }
  }
  word pre(core.begin(), core.begin() + out.p);
  word mid(core.begin() + out.p, core.begin() + out.p + out.g);
  word suf(core.begin() + out.p + out.g, core.end());
  out.p_ok = in_prefix_collection(sys, pre);
  out.g_ok = in_good_collection(sys, mid);
  out.s_ok = in_suffix_collection(sys, suf);
  return out;
}

bool decomposition_rule::in_prefix_collection(const shift_system& sys, const word& w) const {
  if (w.empty()) return true;
  switch (kind_) {
    case kind::trivial:
    case kind::beta_suffix: return false; // prefixes are always empty
    case kind::table: {
      for (const auto& [key, ps] : table_) {
        word full = parse_word(key, sys.alpha.size);
        if (static_cast<int>(w.size()) == ps.first &&
            std::equal(w.begin(), w.end(), full.begin()))
          return true;
      }
      return false;
    }
  }
  return false;
}

bool decomposition_rule::in_good_collection(const shift_system& sys, const word& w) const {
  if (w.empty()) return true;
  switch (kind_) {
    case kind::trivial: return true;
    case kind::beta_suffix: return beta_suffix_len(sys, w) == 0;
    case kind::table: {
      auto it = table_.find(word_str(w));
      return it != table_.end() && it->second.first == 0 && it->second.second == 0;
    }
  }
  return false;
}

bool decomposition_rule::in_suffix_collection(const shift_system& sys, const word& w) const {
  if (w.empty()) return true;
  switch (kind_) {
    case kind::trivial: return false;
    case kind::beta_suffix: {
      const word& d = sys.rule.beta_digits();
      return w.size() <= d.size() && std::equal(w.begin(), w.end(), d.begin());
    }
    case kind::table: {
      for (const auto& [key, ps] : table_) {
        word full = parse_word(key, sys.alpha.size);
        if (static_cast<int>(w.size()) == ps.second &&
            std::equal(w.begin(), w.end(), full.end() - ps.second))
          return true;
      }
      return false;
    }
  }
  return false;
}

namespace {

segment_collection wrap(const shift_system& sys, const decomposition_rule& rule,
                        const std::string& label,
                        bool (decomposition_rule::*member)(const shift_system&, const word&)
                            const) {
  auto s = std::make_shared<shift_system>(sys);
  auto r = std::make_shared<decomposition_rule>(rule);
  return segment_collection{label,
                            [s, r, member](const word& w) { return ((*r).*member)(*s, w); }};
}

} // namespace

segment_collection decomposition_rule::prefix_collection(const shift_system& sys) const {
  return wrap(sys, *this, name() + ".P", &decomposition_rule::in_prefix_collection);
}
segment_collection decomposition_rule::suffix_collection(const shift_system& sys) const {
  return wrap(sys, *this, name() + ".S", &decomposition_rule::in_suffix_collection);
}
segment_collection decomposition_rule::good_collection(const shift_system& sys) const {
  return wrap(sys, *this, name() + ".G", &decomposition_rule::in_good_collection);
}
segment_collection decomposition_rule::prefix_union_suffix(const shift_system& sys) const {
  return segment_collection::unite(prefix_collection(sys), suffix_collection(sys));
}

segment_collection decomposition_rule::good_core(const shift_system& sys, int M) const {
  auto s = std::make_shared<shift_system>(sys);
  auto r = std::make_shared<decomposition_rule>(*this);
  return segment_collection{name() + ".G^" + std::to_string(M), [s, r, M](const word& w) {
                              try {
                                auto sp = r->decompose(*s, w);
                                return sp.p <= M && sp.s <= M;
                              } catch (const domain_error&) {
                                return false;
                              }
                            }};
}

// ---------------------------------------------------------------------------
// gluing

gluing_spec build_gluing_spec(const shift_system& sys, int max_len) {
  gluing_spec spec;
  for (int a = 0; a < sys.alpha.size; ++a) {
    for (int b = 0; b < sys.alpha.size; ++b) {
      bool found = false;
      for (int len = 0; len <= max_len && !found; ++len) {
        // lexicographic scan over candidate connectors of this length
        word c(static_cast<size_t>(len), 0);
        while (true) {
          word joined;
          joined.push_back(static_cast<symbol>(a));
          joined.insert(joined.end(), c.begin(), c.end());
          joined.push_back(static_cast<symbol>(b));
          if (sys.admissible(joined)) {
            spec.connectors[{static_cast<symbol>(a), static_cast<symbol>(b)}] = c;
            spec.tau = std::max(spec.tau, len);
            found = true;
            break;
          }
          int i = len - 1;
          while (i >= 0 && c[static_cast<size_t>(i)] == sys.alpha.size - 1) {
            c[static_cast<size_t>(i)] = 0;
            --i;
          }
          if (i < 0) break;
          ++c[static_cast<size_t>(i)];
        }
      }
      if (!found) spec.missing.push_back({static_cast<symbol>(a), static_cast<symbol>(b)});
    }
  }
  return spec;
}

namespace {

struct assembly_state {
  int start = 0;
  word symbols;
  prefix_checker checker;

  assembly_state(const shift_system& sys, int start_coord)
      : start(start_coord), checker(sys.rule, sys.alpha) {}

  int end() const { return start + static_cast<int>(symbols.size()) - 1; }
  bool covers(int c) const { return c >= start && c <= end(); }
  symbol at(int c) const { return symbols[static_cast<size_t>(c - start)]; }

  bool push(symbol s) {
    if (!checker.push(s)) return false;
    symbols.push_back(s);
    return true;
  }
  void pop_to(size_t size) {
    while (symbols.size() > size) {
      checker.pop();
      symbols.pop_back();
    }
  }
};

// append `count` free symbols then the fixed tail, backtracking over the
// free choices in lexicographic order
bool append_with_filler(const shift_system& sys, assembly_state& a, int count,
                        const word& fixed_tail, std::uint64_t& budget) {
  if (count == 0) {
    size_t mark = a.symbols.size();
    for (symbol s : fixed_tail) {
      if (budget == 0) throw budget_error("gluing budget exceeded");
      --budget;
      if (!a.push(s)) {
        a.pop_to(mark);
        return false;
      }
    }
    return true;
  }
  for (int s = 0; s < sys.alpha.size; ++s) {
    if (budget == 0) throw budget_error("gluing budget exceeded");
    --budget;
    if (!a.push(static_cast<symbol>(s))) continue;
    if (append_with_filler(sys, a, count - 1, fixed_tail, budget)) return true;
    a.pop_to(a.symbols.size() - 1);
  }
  return false;
}

} // namespace

glue_result glue(const shift_system& sys, const std::vector<glue_segment>& segments,
                 const dyadic_scale& delta, int tau_limit, std::uint64_t budget) {
  if (delta.m < 1) throw config_error("glue needs delta < 1");
  // closed-ball shadowing: d_{n_j} <= 2^-m is agreement on the window
  // [-(m-1), n_j - 1 + (m-1)], so each segment contributes that window of
  // its point.  At m = 1 the blocks are the bare segment words.
  int pad = delta.m - 1;
  glue_result out;

  if (segments.empty()) {
    // empty-segment convention: any fixed admissible point, no gaps
    out.y = sys.canonical_point(sys.enumerate_words(1).front());
    out.verified = true;
    return out;
  }

  assembly_state a(sys, -pad);
  {
    window_word b0 = segments[0].x.window(-pad, segments[0].n - 1 + pad);
    for (symbol s : b0.syms)
      if (!a.push(s)) throw domain_error("glue: first segment window not admissible");
  }
  out.offsets.push_back(0);

  for (size_t j = 1; j < segments.size(); ++j) {
    long prev_off = out.offsets.back();
    long prev_end = prev_off + segments[j - 1].n; // one past the previous core
    const point& x = segments[j].x;
    int n = segments[j].n;
    bool placed = false;
    for (int g = 0; g <= tau_limit && !placed; ++g) {
      long off = prev_end + g;
      long bstart = off - pad;
      window_word blk = x.window(-pad, n - 1 + pad);
      // overlap consistency against the built assembly
      bool consistent = true;
      for (long c = bstart; c <= a.end() && consistent; ++c)
        consistent = (a.at(static_cast<int>(c)) == blk.at(static_cast<int>(c - off)));
      if (!consistent) continue;
      int filler = static_cast<int>(std::max<long>(0, bstart - a.end() - 1));
      word tail;
      for (long c = std::max<long>(bstart, a.end() + 1); c <= off + n - 1 + pad; ++c)
        tail.push_back(blk.at(static_cast<int>(c - off)));
      if (append_with_filler(sys, a, filler, tail, budget)) {
        out.offsets.push_back(off);
        out.gaps.push_back(g);
        out.max_gap = std::max(out.max_gap, g);
        placed = true;
      }
    }
    if (!placed) {
      symbol last = a.symbols.back();
      symbol first = x.at(0);
      throw domain_error("glue: no admissible connector within tau for symbol pair (" +
                         std::to_string(static_cast<int>(last)) + "," +
                         std::to_string(static_cast<int>(first)) + ") at segment " +
                         std::to_string(j));
    }
  }

  out.y = sys.canonical_point(window_word{a.start, a.symbols});
  out.verified = true;
  for (size_t j = 0; j < segments.size(); ++j) {
    metric_result d = bowen_dn(out.y.shifted(out.offsets[j]), segments[j].x, segments[j].n,
                               delta.m + 1);
    out.shadow_distances.push_back(d);
    if (!d.le(delta)) out.verified = false;
  }
  return out;
}

glue_result glue_words(const shift_system& sys, const std::vector<word>& segments,
                       const dyadic_scale& delta, int tau_limit, std::uint64_t budget) {
  std::vector<glue_segment> segs;
  for (const auto& w : segments) {
    if (w.empty()) continue; // (x, 0) is the empty segment
    segs.push_back(glue_segment{sys.canonical_point(w), static_cast<int>(w.size())});
  }
  return glue(sys, segs, delta, tau_limit, budget);
}

// ---------------------------------------------------------------------------
// specification checks

namespace {

std::vector<word> collection_words(const shift_system& sys, const segment_collection& C,
                                   int n_lo, int n_hi, std::uint64_t budget) {
  std::vector<word> out;
  for (int n = std::max(1, n_lo); n <= n_hi; ++n) {
    sys.for_each_word(n, [&](const word& w) {
      if (C.contains(w)) out.push_back(w);
    }, budget);
  }
  return out;
}

// iterate all k-tuples over [0, count)
template <typename Fn>
void for_each_tuple(size_t count, int k, Fn&& fn) {
  std::vector<size_t> idx(static_cast<size_t>(k), 0);
  if (count == 0) return;
  while (true) {
    fn(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<size_t>(pos)] == count - 1) {
      idx[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++idx[static_cast<size_t>(pos)];
  }
}

} // namespace

specification_report specification_check(const shift_system& sys,
                                         const segment_collection& C, const dyadic_scale& delta,
                                         int tau_limit, int k_max, int n_max,
                                         std::uint64_t budget) {
  specification_report rep;
  auto words = collection_words(sys, C, 1, n_max, budget);
  for (int k = 1; k <= k_max; ++k) {
    for_each_tuple(words.size(), k, [&](const std::vector<size_t>& idx) {
      std::vector<word> tuple;
      for (size_t i : idx) tuple.push_back(words[i]);
      ++rep.tuples_checked;
      try {
        auto res = glue_words(sys, tuple, delta, tau_limit, budget);
        rep.max_gap_seen = std::max(rep.max_gap_seen, res.max_gap);
        if (!res.verified) throw domain_error("shadowing inequality failed");
      } catch (const domain_error& e) {
        ++rep.failures;
        if (rep.failure_witness.empty()) {
          rep.failure_witness = tuple;
          rep.failure_reason = e.what();
        }
      }
    });
  }
  rep.pass = rep.failures == 0;
  return rep;
}

specification_report good_core_specification_check(const shift_system& sys,
                                                   const decomposition_rule& rule, int M,
                                                   const dyadic_scale& delta, int tau_limit,
                                                   int k_max, int n_span,
                                                   std::uint64_t budget) {
  specification_report rep;
  const int N0 = 1;
  int NM = 2 * M + N0;
  auto core_M = rule.good_core(sys, M);
  auto words = collection_words(sys, core_M, NM, NM + n_span - 1, budget);

  dyadic_scale fine(delta.m + M); // the scale-reduction trick: delta' = delta 2^-M
  for (int k = 1; k <= k_max; ++k) {
    for_each_tuple(words.size(), k, [&](const std::vector<size_t>& idx) {
      ++rep.tuples_checked;
      std::vector<glue_segment> cores;
      std::vector<glue_segment> fulls;
      std::vector<int> p_offsets;
      for (size_t i : idx) {
        const word& w = words[i];
        auto sp = rule.decompose(sys, w);
        point full = sys.canonical_point(w);
        fulls.push_back(glue_segment{full, static_cast<int>(w.size())});
        cores.push_back(glue_segment{full.shifted(sp.p), sp.g});
        p_offsets.push_back(sp.p);
      }
      try {
        auto res = glue(sys, cores, fine, tau_limit, budget);
        rep.max_gap_seen = std::max(rep.max_gap_seen, res.max_gap);
        // the core-glued orbit must shadow the full segments at scale delta
        for (size_t j = 0; j < fulls.size(); ++j) {
          metric_result d = bowen_dn(res.y.shifted(res.offsets[j] - p_offsets[j]), fulls[j].x,
                                     fulls[j].n, delta.m + 1);
          if (!d.le(delta))
            throw domain_error("full-segment shadowing failed at scale delta");
        }
      } catch (const domain_error& e) {
        ++rep.failures;
        if (rep.failure_witness.empty()) {
          for (size_t i : idx) rep.failure_witness.push_back(words[i]);
          rep.failure_reason = e.what();
        }
      }
    });
  }
  rep.pass = rep.failures == 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Bowen distortion

distortion_report bowen_distortion(const shift_system& sys, const potential& phi,
                                   const segment_collection& C, const dyadic_scale& eps,
                                   int n_max, std::uint64_t budget) {
  if (eps.m < 1) throw config_error("bowen_distortion needs eps < 1");
  distortion_report rep;
  rep.empirical = interval(0.0);
  double worst_mid = 0.0, worst_width = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    coord_window ball = open_ball_window(n, eps);
    coord_window rw = phi.read_window(n);
    int lo = std::min(ball.lo, rw.lo), hi = std::max(ball.hi, rw.hi);
    // group U-words by the ball-window restriction; within one group every
    // pair is mutually in the other's eps-ball
    struct group_stat {
      double min_all = 1e300, max_all = -1e300;
      double min_C = 1e300, max_C = -1e300;
      bool has_C = false;
    };
    std::unordered_map<std::string, group_stat> groups;
    sys.for_each_word(hi - lo + 1, [&](const word& u) {
      window_word z{lo, u};
      interval v = phi.birkhoff_on(z, n);
      worst_width = std::max(worst_width, v.width());
      word core(u.begin() + (0 - lo), u.begin() + (0 - lo) + n);
      std::string key(u.begin() + (ball.lo - lo), u.begin() + (ball.hi - lo) + 1);
      auto& gs = groups[key];
      double mid = v.mid();
      gs.min_all = std::min(gs.min_all, mid);
      gs.max_all = std::max(gs.max_all, mid);
      if (C.contains(core)) {
        gs.has_C = true;
        gs.min_C = std::min(gs.min_C, mid);
        gs.max_C = std::max(gs.max_C, mid);
        ++rep.pairs;
      }
    }, budget);
    double per_n_max = 0.0;
    for (const auto& [key, gs] : groups) {
      if (!gs.has_C) continue;
      per_n_max = std::max({per_n_max, gs.max_all - gs.min_C, gs.max_C - gs.min_all});
    }
    rep.per_n.push_back({n, per_n_max});
    worst_mid = std::max(worst_mid, per_n_max);
  }
  rep.empirical = interval(std::max(0.0, worst_mid - 2 * worst_width),
                           worst_mid + 2 * worst_width);
  rep.analytic = bowen_series_bound(sys, phi, eps, budget).hi;
  rep.within_analytic = worst_mid <= rep.analytic + 1e-9;
  return rep;
}

// ---------------------------------------------------------------------------
// hypothesis certificate

certificate hypothesis_certificate(const shift_system& sys, const potential& phi,
                                   const decomposition_rule& rule, const dyadic_scale& delta,
                                   const dyadic_scale& eps, const std::vector<int>& M_list,
                                   int n_max, std::uint64_t budget) {
  if (delta.m < eps.m + 6)
    throw config_error("scale-ladder violation: need m_delta >= m_eps + 6 (eps > 40 delta)");
  certificate cert;
  cert.m_delta = delta.m;
  cert.m_eps = eps.m;

  // oracle pressure and a ratio-method cross check
  if (phi.is_locally_constant()) {
    auto sol = rpf_solve(sys, phi);
    cert.oracle_pressure = sol.pressure;
    cert.oracle_exact = sol.block_encoding_exact;
  } else {
    cert.oracle_exact = false;
  }
  {
    auto pe = pressure(sys, segment_collection::everything(), phi, dyadic_scale(1),
                       dyadic_scale(1), std::min(n_max, 16), budget);
    cert.estimate_pressure = pe.value;
    if (!phi.is_locally_constant()) cert.oracle_pressure = pe.value;
  }

  // (I): specification of the good cores, via the scale-reduction trick
  cert.pass_i = true;
  for (int M : M_list) {
    int tau_limit = 2 * (delta.m + M) + 6;
    auto rep = good_core_specification_check(sys, rule, M, delta, tau_limit, 2, 2, budget);
    cert.spec.push_back({M, 2 * M + 1, rep.max_gap_seen, rep.tuples_checked, rep.pass});
    cert.pass_i = cert.pass_i && rep.pass;
  }

  // (II): Bowen property on G at scale eps
  auto dist = bowen_distortion(sys, phi, rule.good_collection(sys), eps,
                               std::min(n_max, 10), budget);
  cert.bowen_K = dist.empirical;
  cert.bowen_K_analytic = dist.analytic;
  cert.var_eps = variation(sys, phi, eps, budget);
  for (int M : M_list)
    cert.K_M.push_back({M, dist.analytic + 2.0 * M * cert.var_eps.hi});
  cert.pass_ii = dist.within_analytic;

  // (III): pressure gap for P u S at scale delta plus the variation terms
  auto ps = pressure(sys, rule.prefix_union_suffix(sys), phi, delta, std::nullopt,
                     std::min(n_max, 16), budget);
  cert.ps_pressure = ps.value;
  cert.ps_bounded = ps.bounded_support;
  cert.ps_spread = ps.ratio_spread;
  cert.var_15delta = variation_at_multiple(sys, phi, 15, delta.m, budget);
  cert.margin_iii = cert.oracle_pressure - ps.value - cert.var_eps.hi;
  cert.margin_iii_sharp = cert.oracle_pressure - ps.value - cert.var_15delta.hi;
  cert.pass_iii = cert.margin_iii > 0.0;

  // shifts are expansive at every scale below 1, so the expansivity
  // obstruction carries no pressure at eps = 2^-m, m >= 1
  cert.expansive_at_eps = eps.m >= 1;

  cert.pass = cert.pass_i && cert.pass_ii && cert.pass_iii && cert.expansive_at_eps;
  return cert;
}

core_density_report core_density_check(const shift_system& sys, const potential& phi,
                                       const decomposition_rule& rule, const dyadic_scale& gamma,
                                       double alpha1, double alpha2,
                                       const std::vector<int>& M_ladder, int n_lo, int n_hi,
                                       double oracle_P, std::uint64_t budget) {
  if (gamma.m < 2) throw config_error("core_density_check needs 2*gamma < 1");
  dyadic_scale two_gamma(gamma.m - 1);
  core_density_report rep;
  auto all = segment_collection::everything();
  auto good = rule.good_collection(sys);

  std::vector<double> log_all(static_cast<size_t>(n_hi + 1), 0.0);
  for (int n = n_lo; n <= n_hi; ++n) {
    auto va = partition_sum(sys, all, phi, two_gamma, two_gamma, n, budget);
    log_all[static_cast<size_t>(n)] = va.log_value.mid();
    if (va.log_value.mid() < std::log(alpha1) + n * oracle_P) rep.lambda_all_large = false;
    auto vg = partition_sum(sys, good, phi, gamma, gamma, n, budget);
    rep.upper_G.push_back({n, std::exp(vg.log_value.mid() - n * oracle_P)});
    rep.fitted_C4 = std::max(rep.fitted_C4, rep.upper_G.back().second);
  }

  for (int M : M_ladder) {
    bool works = true;
    auto coll = rule.good_core(sys, M);
    for (int n = n_lo; n <= n_hi; ++n) {
      auto vm = partition_sum(sys, coll, phi, two_gamma, two_gamma, n, budget);
      double ratio = vm.empty() ? 0.0
                                : std::exp(vm.log_value.mid() - log_all[static_cast<size_t>(n)]);
      rep.rows.push_back({M, n, ratio});
      if (ratio < 1.0 - alpha2) works = false;
    }
    if (works && !rep.least_M) rep.least_M = M;
  }
  return rep;
}

} // namespace ergolab

#include "ergolab/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ergolab {

// ---------------------------------------------------------------------------
// roof and flow

rational roof_function::value(const word& read) const {
  auto it = table.find(word_str(read));
  if (it == table.end())
    throw domain_error("roof table has no entry for word " + word_str(read));
  return it->second;
}

rational roof_function::value_at(const point& x, long k) const {
  word w;
  for (int i = 0; i < depth; ++i) w.push_back(x.at(k + i));
  return value(w);
}

rational roof_function::r_min() const {
  rational best;
  bool first = true;
  for (const auto& [k, v] : table) {
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

rational roof_function::r_max() const {
  rational best;
  bool first = true;
  for (const auto& [k, v] : table) {
    if (first || best < v) best = v;
    first = false;
  }
  return best;
}

void roof_function::validate(const shift_system& base) const {
  if (depth < 1) throw config_error("roof depth must be >= 1");
  base.for_each_word(depth, [&](const word& w) {
    auto it = table.find(word_str(w));
    if (it == table.end())
      throw config_error("roof table missing entry for admissible word " + word_str(w));
    if (!(rational(0) < it->second))
      throw config_error("roof must be strictly positive");
  });
}

roof_function roof_function::constant(const rational& r) {
  roof_function f;
  f.depth = 1;
  // one entry per possible symbol; validate() trims the requirement to the
  // admissible ones
  for (int s = 0; s < 64; ++s) f.table[word_str(word{static_cast<symbol>(s)})] = r;
  return f;
}

flow_point flow(const suspension_flow& f, flow_point p, rational t, int max_crossings) {
  int crossings = 0;
  while (!(t.is_zero())) {
    if (++crossings > max_crossings)
      throw config_error("flow horizon exceeded");
    if (!t.is_negative()) {
      rational remain = f.roof.value_at(p.base, 0) - p.height;
      if (t < remain) {
        p.height = p.height + t;
        return p;
      }
      t = t - remain;
      p.base = p.base.shifted(1);
      p.height = rational(0);
    } else {
      if (!(p.height.is_zero())) {
        rational back = -t;
        if (back <= p.height) {
          p.height = p.height - back;
          return p;
        }
        t = t + p.height;
        p.height = rational(0);
      } else {
        p.base = p.base.shifted(-1);
        rational r = f.roof.value_at(p.base, 0);
        if (-t < r) {
          p.height = r + t;
          return p;
        }
        t = t + r;
      }
    }
  }
  return p;
}

double flow_metric(const suspension_flow& f, const flow_point& p, const flow_point& q,
                   int horizon) {
  double rmin = f.roof.r_min().to_double();
  struct rep {
    point base;
    rational h;
  };
  auto fwd = [&](const flow_point& z) {
    return rep{z.base.shifted(1), z.height - f.roof.value_at(z.base, 0)};
  };
  auto bwd = [&](const flow_point& z) {
    point back = z.base.shifted(-1);
    return rep{back, z.height + f.roof.value_at(back, 0)};
  };
  auto dist = [&](const rep& a, const rep& b) {
    double hd = std::abs((a.h - b.h).to_double()) / rmin;
    double bd = metric(a.base, b.base, horizon).value();
    return std::max(bd, hd);
  };
  // seam cases are resolved by re-charting one point across a roof crossing;
  // shifting both at once would shrink base distances and is not allowed
  rep rp{p.base, p.height}, rq{q.base, q.height};
  double best = dist(rp, rq);
  best = std::min(best, dist(fwd(p), rq));
  best = std::min(best, dist(bwd(p), rq));
  best = std::min(best, dist(rp, fwd(q)));
  best = std::min(best, dist(rp, bwd(q)));
  return best;
}

flow_distance flow_d_t(const suspension_flow& f, const flow_point& p, const flow_point& q,
                       const rational& t, const rational& step, int horizon) {
  if (!(rational(0) < step)) throw config_error("flow_d_t needs a positive grid step");
  flow_distance out;
  rational s(0);
  flow_point a = p, b = q;
  while (true) {
    out.value = std::max(out.value, flow_metric(f, a, b, horizon));
    if (!(s < t)) break;
    rational next = s + step;
    if (t < next) next = t;
    a = flow(f, a, next - s);
    b = flow(f, b, next - s);
    s = next;
  }
  // between grid points heights drift by at most the elapsed time
  out.correction = (step / f.roof.r_min()).to_double();
  return out;
}

ball_identity_report time_t_ball_check(const suspension_flow& f, const dyadic_scale& eps, int n,
                                       const rational& t, const rational& step, int samples,
                                       std::uint64_t seed) {
  ball_identity_report rep;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  double e = eps.value();

  auto random_point = [&]() {
    int len = 32;
    word w;
    prefix_checker chk(f.base.rule, f.base.alpha);
    for (int i = 0; i < len; ++i) {
      // random admissible extension
      int start = static_cast<int>(rng() % static_cast<std::uint64_t>(f.base.alpha.size));
      for (int d = 0; d < f.base.alpha.size; ++d) {
        symbol s = static_cast<symbol>((start + d) % f.base.alpha.size);
        if (chk.push(s)) {
          w.push_back(s);
          break;
        }
      }
    }
    point base = f.base.canonical_point(window_word{-8, w});
    rational r = f.roof.value_at(base, 0);
    std::int64_t den = 16;
    std::int64_t num = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(den));
    rational h = rational(num, den) * r;
    return flow_point{base, h};
  };

  rational nt = t * rational(n);
  for (int i = 0; i < samples; ++i) {
    flow_point p = random_point();
    flow_point q = random_point();
    // flow ball of order n*t
    bool in_flow = flow_d_t(f, p, q, nt, step).value <= e;
    // time-t-map ball of order n in the d_t metric
    bool in_map = true;
    flow_point a = p, b = q;
    for (int k = 0; k < n && in_map; ++k) {
      if (flow_d_t(f, a, b, t, step).value > e) in_map = false;
      a = flow(f, a, t);
      b = flow(f, b, t);
    }
    if (in_flow != in_map) ++rep.disagreements;
  }
  rep.pass = rep.disagreements == 0;
  return rep;
}

// ---------------------------------------------------------------------------
// flow collections and brackets

flow_collection flow_collection::nothing() {
  return {"empty",
          [](const suspension_flow&, const point&, const rational&, const rational&) {
            return false;
          }};
}

flow_collection flow_collection::duration_window(rational a, rational b) {
  return {"duration[" + a.str() + "," + b.str() + "]",
          [a, b](const suspension_flow&, const point&, const rational&, const rational& dur) {
            return a <= dur && dur <= b;
          }};
}

flow_collection flow_collection::word_lift(segment_collection base_words, int max_len) {
  auto words = std::make_shared<segment_collection>(std::move(base_words));
  return {"lift(" + words->name + ")",
          [words, max_len](const suspension_flow& f, const point& x, const rational& h,
                           const rational& dur) {
            if (!h.is_zero()) return false;
            // the duration must be the roof sum of an initial word in the set
            rational sum(0);
            for (int len = 1; len <= max_len; ++len) {
              sum = sum + f.roof.value_at(x, len - 1);
              if (dur < sum) return false;
              if (sum == dur) {
                word w;
                for (int i = 0; i < len; ++i) w.push_back(x.at(i));
                return words->contains(w);
              }
            }
            return false;
          }};
}

bool bracket_contains(const suspension_flow& f, const flow_collection& C, const point& x,
                      const rational& height, int n) {
  if (C.is_all()) return true;
  const rational one(1);

  // probe a start (base point, start height, reachable duration interval)
  auto probe = [&](const point& base, const rational& h, const rational& d_lo,
                   const rational& d_hi) {
    // exact roof-sum-aligned durations (word lifts) starting at height 0
    if (h.is_zero()) {
      rational sum(0);
      int cap = 4 * n + 16;
      for (int len = 1; len <= cap; ++len) {
        sum = sum + f.roof.value_at(base, len - 1);
        if (d_hi < sum) break;
        if (!(sum < d_lo) && C.pred(f, base, rational(0), sum)) return true;
      }
    }
    // interval-style predicates (duration windows): endpoints and midpoint
    rational mid = (d_lo + d_hi) * rational(1, 2);
    return C.pred(f, base, h, d_lo) || C.pred(f, base, h, d_hi) || C.pred(f, base, h, mid);
  };

  // s in {0, 1}: the extreme backward shifts; durations D = n + s + [0, 1]
  if (probe(x, height, rational(n), rational(n) + one)) return true;
  {
    flow_point back = flow(f, flow_point{x, height}, -one);
    if (probe(back.base, back.height, rational(n) + one, rational(n) + one + one)) return true;
  }

  // crossing-aligned backward shifts: s_i = h + sum of roofs of the i
  // preceding fibers gives the start (sigma^{-i} x, 0)
  rational s = height;
  for (int i = 0;; ++i) {
    point base = x.shifted(-i);
    if (one < s) break;
    if (probe(base, rational(0), rational(n) + s, rational(n) + s + one)) return true;
    s = s + f.roof.value_at(x, -(i + 1));
  }
  return false;
}

// ---------------------------------------------------------------------------
// flow partition sums

namespace {

struct candidate {
  word covering; // context + covering word, starting at -pad
  int pad = 0;
  rational height;
};

// integral of the lifted potential over [0, t] starting at (x-word, s0)
double flow_integral(const suspension_flow& f, const potential& phi, const point& x,
                     const rational& s0, const rational& t) {
  if (phi.is_identically_zero()) return 0.0;
  double total = 0.0;
  rational remaining = t;
  long k = 0;
  rational offset = s0;
  while (rational(0) < remaining) {
    rational r = f.roof.value_at(x, k);
    rational span = r - offset;
    if (remaining < span) span = remaining;
    total += phi.eval_at(x, k).mid() * span.to_double();
    remaining = remaining - span;
    offset = rational(0);
    ++k;
  }
  return total;
}

} // namespace

namespace {

// walk the covering-word tree: context of length pad, then core symbols
// until the roof time of the readable core positions exceeds the horizon
void covering_dfs(const suspension_flow& f, int pad, const rational& horizon,
                  std::uint64_t budget, const std::function<void(const word&)>& leaf) {
  prefix_checker chk(f.base.rule, f.base.alpha);
  std::uint64_t nodes = 0;
  std::function<void(rational)> rec = [&](rational covered) {
    if (++nodes > budget) throw budget_error("flow enumeration budget exceeded");
    if (chk.size() > pad && horizon < covered) {
      leaf(chk.current());
      return;
    }
    for (int s = 0; s < f.base.alpha.size; ++s) {
      if (!chk.push(static_cast<symbol>(s))) continue;
      rational next = covered;
      int k = chk.size() - pad - f.roof.depth; // newly readable core position
      if (k >= 0) {
        word rw(chk.current().begin() + pad + k,
                chk.current().begin() + pad + k + f.roof.depth);
        next = covered + f.roof.value(rw);
      }
      rec(next);
      chk.pop();
    }
  };
  rec(rational(0));
}

} // namespace

flow_partition_value flow_partition_sum(const suspension_flow& f, const flow_collection& C,
                                        const potential& phi, const dyadic_scale& delta,
                                        const dyadic_scale& eps, int n, const rational& step,
                                        std::uint64_t budget) {
  if (delta.m < 1) throw config_error("flow_partition_sum needs delta < 1");
  flow_partition_value out;
  out.t = n;

  int pad = delta.m - 1;
  const rational horizon = rational(n) + rational(2); // cover [0, n] plus slack
  double e = eps.value();
  double weight_slack = phi.is_identically_zero()
                            ? 0.0
                            : phi.max_abs() * (2.0 * e * f.roof.r_max().to_double());

  // first pass: count candidates to pick the selection mode (the roof of
  // the first core position needs no point construction)
  std::uint64_t cand_count = 0;
  covering_dfs(f, pad, horizon, budget, [&](const word& w) {
    word rw(w.begin() + pad, w.begin() + pad + f.roof.depth);
    rational r0 = f.roof.value(rw);
    if (C.is_all()) {
      for (rational h(0); h < r0; h = h + step) ++cand_count;
      return;
    }
    point x = f.base.canonical_point(window_word{-pad, w});
    for (rational h(0); h < r0; h = h + step) {
      if (!bracket_contains(f, C, x, h, n)) continue;
      ++cand_count;
    }
  });
  out.candidates = cand_count;
  out.exact_pairwise = cand_count <= 3000;

  log_sum_acc acc;
  std::uint64_t selected = 0;
  std::vector<candidate> sampled; // reservoir for cross-bucket certificates
  std::mt19937_64 rng(977);

  if (out.exact_pairwise) {
    std::vector<flow_point> pts;
    covering_dfs(f, pad, horizon, budget, [&](const word& w) {
      point x = f.base.canonical_point(window_word{-pad, w});
      rational r0 = f.roof.value_at(x, 0);
      for (rational h(0); h < r0; h = h + step) {
        if (!C.is_all() && !bracket_contains(f, C, x, h, n)) continue;
        flow_point p{x, h};
        bool ok = true;
        for (const auto& q : pts) {
          if (flow_d_t(f, p, q, rational(n), step).value <= delta.value()) {
            ok = false;
            break;
          }
        }
        if (ok) {
          pts.push_back(p);
          double wgt = flow_integral(f, phi, x, h, rational(n));
          acc.add(interval(wgt - weight_slack, wgt + weight_slack));
        }
      }
    });
    selected = pts.size();
  } else {
    // bucketed greedy: candidates sharing a covering word are separated by
    // their flow distance; distinct covering words differ within the time
    // window and are counted as separated, with sampled verification below
    double rmin = f.roof.r_min().to_double();
    covering_dfs(f, pad, horizon, budget, [&](const word& w) {
      point x = f.base.canonical_point(window_word{-pad, w});
      rational r0 = f.roof.value_at(x, 0);
      // chart base distances are shared across the height pairs of a bucket
      double d_fwd = metric(x.shifted(1), x, delta.m + 1).value();
      double d_bwd = metric(x.shifted(-1), x, delta.m + 1).value();
      rational roof0 = r0;
      rational roof_back = f.roof.value_at(x, -1);
      auto pair_dist = [&](const rational& h, const rational& hc) {
        double direct = std::abs((h - hc).to_double()) / rmin;
        double via_fwd = std::max(d_fwd, std::abs((h - roof0 - hc).to_double()) / rmin);
        double via_bwd = std::max(d_bwd, std::abs((h + roof_back - hc).to_double()) / rmin);
        double via_fwd2 = std::max(d_fwd, std::abs((hc - roof0 - h).to_double()) / rmin);
        double via_bwd2 = std::max(d_bwd, std::abs((hc + roof_back - h).to_double()) / rmin);
        return std::min({direct, via_fwd, via_bwd, via_fwd2, via_bwd2});
      };
      std::vector<rational> chosen;
      for (rational h(0); h < r0; h = h + step) {
        if (!C.is_all() && !bracket_contains(f, C, x, h, n)) continue;
        bool ok = true;
        for (const auto& hc : chosen) {
          if (pair_dist(h, hc) <= delta.value()) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        chosen.push_back(h);
        ++selected;
        double wgt = flow_integral(f, phi, x, h, rational(n));
        acc.add(interval(wgt - weight_slack, wgt + weight_slack));
        if (sampled.size() < 64) sampled.push_back(candidate{w, pad, h});
        else if (rng() % selected == 0) sampled[rng() % sampled.size()] = candidate{w, pad, h};
      }
    });
  }

  out.selected = selected;
  out.log_value = acc.log_value();

  if (!out.exact_pairwise && sampled.size() >= 2) {
    for (size_t i = 0; i + 1 < sampled.size() && out.cross_checks < 96; i += 1) {
      const auto& c1 = sampled[i];
      const auto& c2 = sampled[i + 1];
      if (c1.covering == c2.covering) continue;
      ++out.cross_checks;
      flow_point p1{f.base.canonical_point(window_word{-c1.pad, c1.covering}), c1.height};
      flow_point p2{f.base.canonical_point(window_word{-c2.pad, c2.covering}), c2.height};
      if (flow_d_t(f, p1, p2, rational(n), step).value <= delta.value())
        ++out.cross_violations;
    }
  }
  return out;
}

flow_pressure_estimate flow_pressure(const suspension_flow& f, const flow_collection& C,
                                     const potential& phi, const dyadic_scale& delta,
                                     const dyadic_scale& eps, const std::vector<int>& t_list,
                                     const rational& step, std::uint64_t budget) {
  flow_pressure_estimate est;
  for (int t : t_list) {
    auto v = flow_partition_sum(f, C, phi, delta, eps, t, step, budget);
    est.log_sums.push_back({t, v.selected == 0 ? -1e300 : v.log_value.mid()});
  }
  int nonempty = 0;
  for (auto& [t, lv] : est.log_sums)
    if (lv > -1e299) ++nonempty;
  if (nonempty < 2 || est.log_sums.back().second <= -1e299) {
    est.bounded_support = true;
    est.value = 0.0;
    return est;
  }
  for (size_t i = 1; i < est.log_sums.size(); ++i) {
    auto [t0, l0] = est.log_sums[i - 1];
    auto [t1, l1] = est.log_sums[i];
    if (l0 <= -1e299) continue;
    est.slopes.push_back({t1, (l1 - l0) / static_cast<double>(t1 - t0)});
  }
  // windowed slope across an even number of steps, cancelling the parity
  // oscillation of thin collections (as in the map-side estimator)
  size_t last = est.log_sums.size() - 1;
  size_t w = std::min<size_t>(4, last);
  if (w >= 3 && w % 2 == 1) --w;
  if (w == 0 || est.log_sums[last - w].second <= -1e299) {
    est.value = est.slopes.empty() ? 0.0 : est.slopes.back().second;
  } else {
    est.value = (est.log_sums[last].second - est.log_sums[last - w].second) /
                static_cast<double>(est.log_sums[last].first - est.log_sums[last - w].first);
  }
  return est;
}

// ---------------------------------------------------------------------------
// oracles

double flow_pressure_root(const suspension_flow& f, const potential& phi, double tol) {
  if (!phi.is_locally_constant())
    throw config_error("flow_pressure_root needs a locally constant potential");
  int depth = std::max({1, phi.depth(), f.roof.depth});

  // P_base((phi - c) r) is strictly decreasing in c with slope in
  // [-r_max, -r_min]; evaluate with the table normalized to keep the
  // exponentials in range
  auto base_pressure = [&](double c) {
    std::unordered_map<std::string, double> table;
    double top = -1e300;
    f.base.for_each_word(depth, [&](const word& w) {
      word pw(w.begin(), w.begin() + phi.depth());
      word rw(w.begin(), w.begin() + f.roof.depth);
      double pv = phi.depth() == 0 ? phi.eval(word{}).mid() : phi.eval(pw).mid();
      double v = (pv - c) * f.roof.value(rw).to_double();
      table[word_str(w)] = v;
      top = std::max(top, v);
    });
    for (auto& [k, v] : table) v -= top;
    auto psi = potential::locally_constant(depth, std::move(table));
    return rpf_solve(f.base, psi).pressure + top;
  };

  double h_top = entropy_oracle(f.base);
  double rmin = f.roof.r_min().to_double();
  double lo = -phi.max_abs() - h_top / rmin - 1.0;
  double hi = phi.max_abs() + h_top / rmin + 1.0;
  if (base_pressure(lo) < 0.0 || base_pressure(hi) > 0.0)
    throw config_error("flow_pressure_root: bracketing failure");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (base_pressure(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Shannon entropy of the word-consumed-by-time-T distribution: the minimal
// prefix-free covering family with the measure's cylinder masses
double covering_entropy(const suspension_flow& f, const markov_measure& mu, const rational& T,
                        std::uint64_t budget) {
  double h = 0.0;
  covering_dfs(f, 0, T, budget, [&](const word& w) {
    double m = mu.cylinder_mass(w);
    if (m > 0) h -= m * std::log(m);
  });
  return h;
}

} // namespace

abramov_report abramov_check(const suspension_flow& f, const markov_measure& base_measure,
                             const std::vector<int>& t_list, std::uint64_t budget) {
  abramov_report rep;
  double h_base = markov_entropy(base_measure);
  double mean_roof = 0.0;
  f.base.for_each_word(f.roof.depth, [&](const word& w) {
    mean_roof += base_measure.cylinder_mass(w) * f.roof.value(w).to_double();
  }, budget);
  rep.oracle_flow_entropy = h_base / mean_roof;
  rep.root_pressure = flow_pressure_root(f, potential::zero());
  rep.below_topological = rep.oracle_flow_entropy <= rep.root_pressure + 1e-9;

  // time-t entropy estimates from covering-family entropies: the renewal
  // increment H(K t) - H((K-1) t) approaches t * h_flow
  const int K = 6;
  for (int t : t_list) {
    double hk = covering_entropy(f, base_measure, rational(K * t), budget);
    double hk1 = covering_entropy(f, base_measure, rational((K - 1) * t), budget);
    rep.h_t.push_back({t, hk - hk1});
  }
  // least squares through the origin-free line h_t ~ slope * t
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [t, h] : rep.h_t) {
    sx += t;
    sy += h;
    sxx += static_cast<double>(t) * t;
    sxy += t * h;
  }
  double c = static_cast<double>(rep.h_t.size());
  rep.slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  for (auto& [t, h] : rep.h_t)
    if (t == 1) rep.h1_estimate = h;
  if (rep.h1_estimate == 0.0 && !rep.h_t.empty())
    rep.h1_estimate = rep.h_t.front().second / rep.h_t.front().first;
  rep.linear_within = std::abs(rep.slope - rep.h1_estimate) <= 0.03 * std::abs(rep.h1_estimate);

  // maximize h/int r over the Bernoulli family on a full base
  if (f.base.rule.kind() == rule_kind::full && f.base.alpha.size == 2) {
    auto value = [&](double p) {
      double H = -(p * std::log(p) + (1 - p) * std::log(1 - p));
      double r0 = f.roof.value(word{0}).to_double();
      double r1 = f.roof.value(word{1}).to_double();
      return H / ((1 - p) * r0 + p * r1);
    };
    double lo = 1e-6, hi = 1 - 1e-6;
    for (int it = 0; it < 200; ++it) {
      double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (value(m1) < value(m2)) lo = m1;
      else hi = m2;
    }
    rep.family_max = value(0.5 * (lo + hi));
    rep.family_attains = std::abs(*rep.family_max - rep.root_pressure) <= 1e-4;
  }
  return rep;
}

double flow_variation(const suspension_flow& f, const potential& phi, const dyadic_scale& eps,
                      std::uint64_t budget) {
  double base_var = variation(f.base, phi, eps, budget).hi;
  // seam pairs: points just below the roof against their crossing images
  double seam = 0.0;
  int len = std::max(phi.read_window().length(), 1) + 1;
  f.base.for_each_word(len, [&](const word& w) {
    word a(w.begin(), w.end() - 1);
    word b(w.begin() + 1, w.end());
    word ra(w.begin(), w.begin() + phi.read_window().length());
    word rb(w.begin() + 1, w.begin() + 1 + phi.read_window().length());
    (void)a;
    (void)b;
    seam = std::max(seam, std::abs(phi.eval(ra).mid() - phi.eval(rb).mid()));
  }, budget);
  return std::max(base_var, seam);
}

flow_certificate flow_hypothesis_report(const suspension_flow& f, const potential& phi,
                                        const flow_collection& bracket_ps,
                                        const dyadic_scale& delta, const dyadic_scale& eps,
                                        int n_max, std::uint64_t budget) {
  flow_certificate cert;
  cert.oracle_pressure = flow_pressure_root(f, phi);
  std::vector<int> ts;
  for (int t = 1; t <= n_max; ++t) ts.push_back(t);
  auto est = flow_pressure(f, bracket_ps, phi, delta, eps, ts, rational(1, 4 << delta.m),
                           budget);
  cert.bracket_ps_pressure = est.value;
  cert.bracket_ps_bounded = est.bounded_support;
  cert.var_eps = flow_variation(f, phi, eps, budget);
  cert.margin = cert.oracle_pressure - cert.bracket_ps_pressure - cert.var_eps;
  cert.pass = cert.margin > 0.0;
  return cert;
}

} // namespace ergolab

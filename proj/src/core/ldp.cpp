#include "ergolab/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ergolab/pressure.hpp"

namespace ergolab {

cylinder_measure empirical_measure(const shift_system& sys, const point& x, int n, int k) {
  if (n < 1 || k < 1) throw config_error("empirical_measure needs n, k >= 1");
  (void)sys;
  std::map<word, double> acc;
  for (int i = 0; i < n; ++i) {
    word w;
    w.reserve(static_cast<size_t>(k));
    for (int c = i; c < i + k; ++c) w.push_back(x.at(c));
    acc[w] += 1.0 / n;
  }
  cylinder_measure out;
  out.depth = k;
  for (auto& [w, m] : acc) {
    out.words.push_back(w);
    out.masses.push_back(m);
  }
  return out;
}

constraint_set constraint_set::all() {
  constraint_set c;
  c.everything = true;
  c.name = "all";
  return c;
}

constraint_set constraint_set::symbol_freq(symbol s, relation r, double theta) {
  constraint_set c;
  c.sym = s;
  c.rel = r;
  c.theta = theta;
  c.name = c.describe();
  return c;
}

bool constraint_set::satisfied(const cylinder_measure& depth1, double tol) const {
  if (everything) return true;
  double freq = depth1.mass_of(word{sym});
  switch (rel) {
    case relation::ge: return freq >= theta - tol;
    case relation::le: return freq <= theta + tol;
    case relation::eq: return std::abs(freq - theta) <= tol;
  }
  return false;
}

std::string constraint_set::describe() const {
  if (everything) return "all";
  std::string op = rel == relation::ge ? ">=" : rel == relation::le ? "<=" : "=";
  return "freq(" + std::to_string(static_cast<int>(sym)) + ") " + op + " " +
         std::to_string(theta);
}

rate_bound rate_upper_bound(const shift_system& sys, const potential& phi,
                            const constraint_set& A, double pressure,
                            std::uint64_t budget) {
  (void)budget;
  rate_bound out;
  auto base = rpf_solve(sys, phi);
  auto freq_of = [&](const markov_measure& m) { return m.marginal(1).mass_of(word{A.sym}); };

  if (A.everything || A.satisfied(base.measure.marginal(1))) {
    // the unconstrained supremum is attained by the equilibrium state
    out.value = markov_entropy(base.measure) + base.measure.integral(phi).mid() - pressure;
    out.argmax = base.measure;
    out.exact_tilt = true;
    return out;
  }

  // single active frequency constraint: tilt the potential by t on the
  // constrained symbol and solve freq(t) = theta by bisection (the dual
  // problem; the constrained supremum sits on the boundary)
  auto tilted = [&](double t) {
    int d = std::max(1, phi.depth());
    std::unordered_map<std::string, double> table;
    sys.for_each_word(d, [&](const word& w) {
      double v = phi.depth() == 0 ? phi.eval(word{}).mid()
                                  : phi.eval(word(w.begin(), w.begin() + phi.depth())).mid();
      if (w[0] == A.sym) v += t;
      table[word_str(w)] = v;
    });
    return rpf_solve(sys, potential::locally_constant(d, std::move(table)));
  };

  double lo = -60, hi = 60;
  double f_lo = freq_of(tilted(lo).measure);
  double f_hi = freq_of(tilted(hi).measure);
  if ((A.theta < f_lo) || (f_hi < A.theta)) {
    out.feasible = false;
    out.value = -std::numeric_limits<double>::infinity();
    return out;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    if (freq_of(tilted(mid).measure) < A.theta) lo = mid;
    else hi = mid;
  }
  auto sol = tilted(0.5 * (lo + hi));
  out.argmax = sol.measure;
  out.exact_tilt = true;
  out.value = markov_entropy(sol.measure) + sol.measure.integral(phi).mid() - pressure;
  return out;
}

decay_rates empirical_decay_rate(const shift_system& sys, const markov_measure& mu,
                                 const constraint_set& A, const std::vector<int>& n_list) {
  (void)sys;
  decay_rates out;
  size_t k = mu.states.size();
  for (int n : n_list) {
    if (A.everything) {
      out.rows.push_back({n, 0.0, false});
      continue;
    }
    // transfer-matrix convolution over (state, count of the symbol)
    std::vector<std::vector<double>> mass(static_cast<size_t>(n) + 1,
                                          std::vector<double>(k, 0.0));
    for (size_t s = 0; s < k; ++s) {
      int c = mu.states[s][0] == A.sym ? 1 : 0;
      mass[static_cast<size_t>(c)][s] += mu.pi[s];
    }
    for (int step = 1; step < n; ++step) {
      std::vector<std::vector<double>> next(static_cast<size_t>(n) + 1,
                                            std::vector<double>(k, 0.0));
      for (int c = 0; c <= step; ++c) {
        for (size_t s = 0; s < k; ++s) {
          double m = mass[static_cast<size_t>(c)][s];
          if (m == 0.0) continue;
          for (size_t t = 0; t < k; ++t) {
            double p = mu.trans[s][t];
            if (p == 0.0) continue;
            int inc = mu.states[t][0] == A.sym ? 1 : 0;
            next[static_cast<size_t>(c + inc)][t] += m * p;
          }
        }
      }
      mass.swap(next);
    }
    double total = 0.0;
    for (int c = 0; c <= n; ++c) {
      double freq = static_cast<double>(c) / n;
      bool in = false;
      switch (A.rel) {
        case constraint_set::relation::ge: in = freq >= A.theta - 1e-12; break;
        case constraint_set::relation::le: in = freq <= A.theta + 1e-12; break;
        case constraint_set::relation::eq: in = std::abs(freq - A.theta) <= 1e-12; break;
      }
      if (!in) continue;
      for (size_t s = 0; s < k; ++s) total += mass[static_cast<size_t>(c)][s];
    }
    if (total <= 0.0) {
      out.rows.push_back({n, -std::numeric_limits<double>::infinity(), true});
    } else {
      out.rows.push_back({n, std::log(total) / n, false});
    }
  }
  return out;
}

decay_rates empirical_decay_rate_mc(const shift_system& sys, const markov_measure& mu,
                                    const constraint_set& A, const std::vector<int>& n_list,
                                    int samples, std::uint64_t seed) {
  (void)sys;
  decay_rates out;
  std::mt19937_64 rng(seed);
  size_t k = mu.states.size();
  auto draw = [&](const std::vector<double>& probs) {
    double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u <= acc) return i;
    }
    return probs.size() - 1;
  };
  for (int n : n_list) {
    int hits = 0;
    for (int trial = 0; trial < samples; ++trial) {
      size_t s = draw(mu.pi);
      int count = mu.states[s][0] == A.sym ? 1 : 0;
      for (int i = 1; i < n; ++i) {
        s = draw(mu.trans[s]);
        if (mu.states[s][0] == A.sym) ++count;
      }
      double freq = static_cast<double>(count) / n;
      bool in = A.rel == constraint_set::relation::ge   ? freq >= A.theta - 1e-12
                : A.rel == constraint_set::relation::le ? freq <= A.theta + 1e-12
                                                        : std::abs(freq - A.theta) <= 1e-12;
      if (in) ++hits;
    }
    if (hits == 0) {
      // zero count: only an upper bound on the rate is available
      out.rows.push_back({n, std::log(1.0 / samples) / n, true});
    } else {
      out.rows.push_back({n, std::log(static_cast<double>(hits) / samples) / n, false});
    }
  }
  return out;
}

upper_energy_report upper_energy_check(const shift_system& sys, const potential& phi,
                                       const shift_measure& mu, const dyadic_scale& gamma,
                                       int n_max, double pressure, std::uint64_t budget) {
  upper_energy_report rep;
  rep.fitted_q = gibbs_upper_check(sys, phi, gamma, 1, n_max, mu, pressure, budget)
                     .fitted_q_upper;
  interval var = variation(sys, phi, gamma, budget);
  for (int n = 1; n <= n_max; ++n) {
    coord_window W = ball_window(n, gamma);
    coord_window rw = phi.read_window(n);
    int lo = std::min(W.lo, rw.lo), hi = std::max(W.hi, rw.hi);
    double sup = -1e300;
    sys.for_each_word(hi - lo + 1, [&](const word& u) {
      window_word z{lo, u};
      word ball(u.begin() + (W.lo - lo), u.begin() + (W.hi - lo) + 1);
      double m = mu.mass(ball);
      if (m <= 0.0) return;
      double phi0 = phi.birkhoff_on(z, n).mid();
      // S_n e_mu = n P - Phi_0
      sup = std::max(sup, (std::log(m) + n * pressure - phi0) / n);
    }, budget);
    double bound = var.hi + std::log(std::max(rep.fitted_q, 1e-300)) / n;
    rep.rows.push_back({n, sup, bound});
    if (sup > bound + 1e-9) rep.pass = false;
  }
  return rep;
}

ldp_report ldp_upper_check(const shift_system& sys, const potential& phi,
                           const markov_measure& mu, const constraint_set& A, int n_max,
                           double pressure, std::uint64_t budget) {
  ldp_report rep;
  std::vector<int> ns;
  for (int n = 4; n <= n_max; n += 4) ns.push_back(n);
  rep.decay = empirical_decay_rate(sys, mu, A, ns);
  auto bound = rate_upper_bound(sys, phi, A, pressure, budget);
  rep.bound = bound.value;

  // fit the slack constant on the first half, verify on the rest
  size_t half = rep.decay.rows.size() / 2;
  for (size_t i = 0; i < half; ++i) {
    const auto& row = rep.decay.rows[i];
    if (row.infeasible) continue;
    double c = (row.value - rep.bound) * row.n / std::log(static_cast<double>(row.n));
    rep.slack_c = std::max(rep.slack_c, c);
  }
  rep.pass = true;
  for (size_t i = half; i < rep.decay.rows.size(); ++i) {
    const auto& row = rep.decay.rows[i];
    if (row.infeasible) continue;
    double allowance = rep.bound + rep.slack_c * std::log(static_cast<double>(row.n)) / row.n;
    rep.final_margin = allowance - row.value;
    if (row.value > allowance + 1e-9) rep.pass = false;
  }
  return rep;
}

} // namespace ergolab

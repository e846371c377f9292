#include "ergolab/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ergolab {

// ---------------------------------------------------------------------------
// cylinder_measure

double cylinder_measure::total() const {
  double t = 0.0;
  for (double m : masses) t += m;
  return t;
}

double cylinder_measure::mass_of(const word& w) const {
  auto it = std::lower_bound(words.begin(), words.end(), w);
  if (it == words.end() || *it != w) return 0.0;
  return masses[static_cast<size_t>(it - words.begin())];
}

namespace {

cylinder_measure collapse(const cylinder_measure& src, int k, bool front) {
  if (k > src.depth) throw config_error("marginal depth exceeds measure depth");
  std::map<word, double> acc;
  for (size_t i = 0; i < src.words.size(); ++i) {
    word w = front ? word(src.words[i].begin(), src.words[i].begin() + k)
                   : word(src.words[i].end() - k, src.words[i].end());
    acc[w] += src.masses[i];
  }
  cylinder_measure out;
  out.depth = k;
  for (auto& [w, m] : acc) {
    out.words.push_back(w);
    out.masses.push_back(m);
  }
  return out;
}

} // namespace

cylinder_measure cylinder_measure::marginal_front(int k) const { return collapse(*this, k, true); }
cylinder_measure cylinder_measure::marginal_back(int k) const { return collapse(*this, k, false); }

double cylinder_measure::shift_defect() const {
  if (depth < 2) return 0.0;
  return weak_star_distance(marginal_front(depth - 1), marginal_back(depth - 1), depth - 1);
}

void cylinder_measure::validate(double tol) const {
  double t = total();
  if (std::abs(t - 1.0) > tol)
    throw config_error("cylinder measure total mass " + std::to_string(t) + " != 1");
  for (double m : masses)
    if (m < -tol) throw config_error("cylinder measure has a negative mass");
}

double weak_star_distance(const cylinder_measure& a, const cylinder_measure& b, int k) {
  if (a.depth < k || b.depth < k)
    throw config_error("weak_star_distance: depth mismatch unresolvable");
  cylinder_measure ma = a.depth == k ? a : a.marginal_front(k);
  cylinder_measure mb = b.depth == k ? b : b.marginal_front(k);
  double tv = 0.0;
  for (size_t i = 0; i < ma.words.size(); ++i)
    tv += std::abs(ma.masses[i] - mb.mass_of(ma.words[i]));
  for (size_t i = 0; i < mb.words.size(); ++i)
    if (ma.mass_of(mb.words[i]) == 0.0) tv += std::abs(mb.masses[i]);
  return 0.5 * tv;
}

// ---------------------------------------------------------------------------
// markov_measure

namespace {

int state_index(const std::vector<word>& states, const word& w) {
  auto it = std::lower_bound(states.begin(), states.end(), w);
  if (it == states.end() || *it != w) return -1;
  return static_cast<int>(it - states.begin());
}

// stationary vector of a row-stochastic matrix by direct elimination
std::vector<double> stationary_vector(const std::vector<std::vector<double>>& P) {
  size_t k = P.size();
  std::vector<std::vector<double>> A(k, std::vector<double>(k + 1, 0.0));
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < k; ++i) A[j][i] = P[i][j] - (i == j ? 1.0 : 0.0);
  for (size_t i = 0; i < k; ++i) A[k - 1][i] = 1.0;
  A[k - 1][k] = 1.0;
  for (size_t col = 0; col < k; ++col) {
    size_t piv = col;
    for (size_t r = col; r < k; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    if (std::abs(A[col][col]) < 1e-14)
      throw config_error("transition matrix has no unique stationary vector");
    for (size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      for (size_t c = col; c <= k; ++c) A[r][c] -= f * A[col][c];
    }
  }
  std::vector<double> pi(k);
  for (size_t i = 0; i < k; ++i) pi[i] = A[i][k] / A[i][i];
  return pi;
}

} // namespace

double markov_measure::cylinder_mass(const word& w) const {
  int L = block_len;
  int n = static_cast<int>(w.size());
  if (n == 0) return 1.0;
  if (n < L) {
    double total = 0.0;
    for (size_t s = 0; s < states.size(); ++s) {
      if (std::equal(w.begin(), w.end(), states[s].begin())) total += pi[s];
    }
    return total;
  }
  word first(w.begin(), w.begin() + L);
  int s = state_index(states, first);
  if (s < 0) return 0.0;
  double mass = pi[static_cast<size_t>(s)];
  for (int i = 1; i + L <= n; ++i) {
    word nxt(w.begin() + i, w.begin() + i + L);
    int t = state_index(states, nxt);
    if (t < 0) return 0.0;
    mass *= trans[static_cast<size_t>(s)][static_cast<size_t>(t)];
    s = t;
  }
  return mass;
}

cylinder_measure markov_measure::marginal(int depth, std::uint64_t budget) const {
  cylinder_measure out;
  out.depth = depth;
  sys.for_each_word(depth, [&](const word& w) {
    out.words.push_back(w);
    out.masses.push_back(cylinder_mass(w));
  }, budget);
  return out;
}

interval markov_measure::integral(const potential& phi, std::uint64_t budget) const {
  int len = phi.read_window().length();
  if (len == 0) return phi.eval(word{});
  interval total(0.0);
  sys.for_each_word(len, [&](const word& w) {
    total += phi.eval(w).scaled(cylinder_mass(w));
  }, budget);
  return total;
}

void markov_measure::validate(double tol) const {
  size_t k = states.size();
  if (pi.size() != k || trans.size() != k)
    throw config_error("markov measure shape mismatch");
  double psum = 0.0;
  for (size_t i = 0; i < k; ++i) {
    double rsum = 0.0;
    for (size_t j = 0; j < k; ++j) {
      if (trans[i][j] < -tol) throw config_error("markov measure: negative transition");
      rsum += trans[i][j];
    }
    if (std::abs(rsum - 1.0) > tol)
      throw config_error("markov measure: row " + std::to_string(i) + " sums to " +
                         std::to_string(rsum));
    psum += pi[i];
  }
  if (std::abs(psum - 1.0) > tol) throw config_error("markov measure: pi does not sum to 1");
  for (size_t j = 0; j < k; ++j) {
    double v = 0.0;
    for (size_t i = 0; i < k; ++i) v += pi[i] * trans[i][j];
    if (std::abs(v - pi[j]) > std::max(tol, 1e-9))
      throw config_error("markov measure: pi is not stationary");
  }
}

markov_measure markov_measure::bernoulli(const shift_system& full_sys, std::vector<double> p) {
  if (full_sys.rule.kind() != rule_kind::full)
    throw config_error("bernoulli measures live on the full shift");
  markov_measure m{full_sys};
  m.block_len = 1;
  m.name = "bernoulli";
  size_t k = p.size();
  if (static_cast<int>(k) != full_sys.alpha.size)
    throw config_error("bernoulli parameter size mismatch");
  for (size_t i = 0; i < k; ++i) m.states.push_back(word{static_cast<symbol>(i)});
  m.pi = p;
  m.trans.assign(k, p);
  m.validate();
  return m;
}

markov_measure markov_measure::from_transitions(const shift_system& sys,
                                                std::vector<std::vector<double>> P) {
  size_t k = static_cast<size_t>(sys.alpha.size);
  if (P.size() != k) throw config_error("transition matrix shape mismatch");
  markov_measure m{sys};
  m.block_len = 1;
  m.name = "markov";
  for (size_t i = 0; i < k; ++i) m.states.push_back(word{static_cast<symbol>(i)});
  m.pi = stationary_vector(P);
  m.trans = std::move(P);
  m.validate(1e-9);
  return m;
}

double markov_entropy(const markov_measure& m) {
  double h = 0.0;
  for (size_t i = 0; i < m.states.size(); ++i) {
    for (size_t j = 0; j < m.states.size(); ++j) {
      double p = m.trans[i][j];
      if (p > 0.0) h -= m.pi[i] * p * std::log(p);
    }
  }
  return h;
}

shift_measure shift_measure::of(const markov_measure& m) {
  auto copy = std::make_shared<markov_measure>(m);
  return shift_measure{copy->name, 0, [copy](const word& w) { return copy->cylinder_mass(w); }};
}

shift_measure shift_measure::of(const cylinder_measure& m) {
  auto copy = std::make_shared<cylinder_measure>(m);
  return shift_measure{"cylinder-depth-" + std::to_string(copy->depth), copy->depth,
                       [copy](const word& w) { return copy->mass_of(w); }};
}

// ---------------------------------------------------------------------------
// Ruelle-Perron-Frobenius via power iteration

namespace {

struct block_graph {
  std::vector<word> states;
  std::vector<std::vector<int>> adj; // 0/1
};

block_graph build_block_graph(const shift_system& sys, int L, std::uint64_t budget) {
  block_graph g;
  g.states = sys.enumerate_words(L, budget);
  size_t k = g.states.size();
  g.adj.assign(k, std::vector<int>(k, 0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      bool overlap = std::equal(g.states[i].begin() + 1, g.states[i].end(),
                                g.states[j].begin());
      if (L == 0) overlap = true;
      if (!overlap) continue;
      word joined = g.states[i];
      joined.push_back(g.states[j].back());
      if (sys.admissible(joined)) g.adj[i][j] = 1;
    }
  }
  return g;
}

bool strongly_connected(const std::vector<std::vector<int>>& a) {
  size_t k = a.size();
  auto reach = [&](bool transpose) {
    std::vector<char> seen(k, 0);
    std::vector<size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (size_t v = 0; v < k; ++v) {
        bool edge = transpose ? a[v][u] != 0 : a[u][v] != 0;
        if (edge && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    for (char s : seen)
      if (!s) return false;
    return true;
  };
  return reach(false) && reach(true);
}

// dominant eigenpair of the nonnegative matrix B via power iteration on
// B + I (primitive when B is irreducible)
std::pair<double, std::vector<double>> power_iterate(
    const std::vector<std::vector<double>>& B, double tol, int max_iter) {
  size_t k = B.size();
  std::vector<double> v(k, 1.0 / static_cast<double>(k)), nv(k);
  double lambda_shifted = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    double norm = 0.0;
    for (size_t i = 0; i < k; ++i) {
      double s = v[i]; // the +I shift
      for (size_t j = 0; j < k; ++j) s += B[i][j] * v[j];
      nv[i] = s;
      norm += s;
    }
    double delta = 0.0;
    for (size_t i = 0; i < k; ++i) {
      nv[i] /= norm;
      delta = std::max(delta, std::abs(nv[i] - v[i]));
    }
    v.swap(nv);
    lambda_shifted = norm;
    if (delta < tol) break;
  }
  return {lambda_shifted - 1.0, v};
}

std::vector<std::vector<double>> transpose(const std::vector<std::vector<double>>& B) {
  size_t k = B.size();
  std::vector<std::vector<double>> T(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) T[j][i] = B[i][j];
  return T;
}

} // namespace

rpf_solution rpf_solve(const shift_system& sys, const potential& phi,
                       std::optional<int> block_len) {
  if (!phi.is_locally_constant())
    throw config_error("the spectral oracle needs a locally constant potential");
  int L = 1;
  if (auto exact = sys.rule.sft_block_length()) L = *exact;
  else L = std::min(sys.rule.memory_bound(), 6); // beta: covering approximation
  L = std::max(L, std::max(1, phi.depth()));
  if (block_len) L = std::max(*block_len, std::max(1, phi.depth()));

  block_graph g = build_block_graph(sys, L, shift_system::default_budget);
  size_t k = g.states.size();
  if (k == 0) throw config_error("no admissible block states");
  if (!strongly_connected(g.adj))
    throw config_error("transition structure is reducible; RPF oracle needs irreducibility");

  rpf_solution sol;
  sol.block_len = L;

  // weight matrix B_uv = e^{phi(u)} A_uv
  std::vector<std::vector<double>> B(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < k; ++i) {
    word rd(g.states[i].begin(), g.states[i].begin() + phi.depth());
    double w = std::exp(phi.eval(rd).mid());
    for (size_t j = 0; j < k; ++j)
      if (g.adj[i][j]) B[i][j] = w;
  }

  auto [lam, v] = power_iterate(B, 1e-13, 100000);
  auto [lam2, u] = power_iterate(transpose(B), 1e-13, 100000);
  sol.lambda = 0.5 * (lam + lam2);
  sol.pressure = std::log(sol.lambda);
  sol.right = v;
  sol.left = u;

  // residuals
  double rr = 0.0, rl = 0.0;
  for (size_t i = 0; i < k; ++i) {
    double bv = 0.0, ub = 0.0;
    for (size_t j = 0; j < k; ++j) {
      bv += B[i][j] * v[j];
      ub += u[j] * B[j][i];
    }
    rr = std::max(rr, std::abs(bv - sol.lambda * v[i]));
    rl = std::max(rl, std::abs(ub - sol.lambda * u[i]));
  }
  sol.residual_right = rr;
  sol.residual_left = rl;

  // spectral gap diagnostic: deflated power iteration on B + I
  {
    std::vector<double> x(k);
    for (size_t i = 0; i < k; ++i) x[i] = (i % 2 == 0) ? 1.0 : -0.5;
    double uv = 0.0;
    for (size_t i = 0; i < k; ++i) uv += u[i] * v[i];
    double mag = 0.0;
    for (int it = 0; it < 2000; ++it) {
      double ux = 0.0;
      for (size_t i = 0; i < k; ++i) ux += u[i] * x[i];
      for (size_t i = 0; i < k; ++i) x[i] -= (ux / uv) * v[i];
      std::vector<double> nx(k, 0.0);
      for (size_t i = 0; i < k; ++i) {
        double s = x[i];
        for (size_t j = 0; j < k; ++j) s += B[i][j] * x[j];
        nx[i] = s;
      }
      double norm = 0.0;
      for (size_t i = 0; i < k; ++i) norm = std::max(norm, std::abs(nx[i]));
      if (norm < 1e-300) {
        mag = 0.0;
        break;
      }
      for (size_t i = 0; i < k; ++i) nx[i] /= norm;
      x.swap(nx);
      mag = norm;
    }
    double second = std::max(0.0, mag - 1.0); // undo the +I shift, magnitude heuristic
    sol.spectral_gap_ok = (sol.lambda - second) > 1e-6 * std::max(1.0, sol.lambda);
  }

  // language cross-check: block-graph paths must count admissible words
  sol.block_encoding_exact = true;
  {
    std::vector<double> cnt(k, 1.0);
    for (int n = L; n <= std::min(L + 8, 14); ++n) {
      if (sys.rule.length_cap() > 0 && n > sys.rule.length_cap()) break;
      double total = 0.0;
      for (size_t i = 0; i < k; ++i) total += cnt[i];
      if (std::llround(total) != static_cast<long long>(sys.count_words(n))) {
        sol.block_encoding_exact = false;
        break;
      }
      std::vector<double> nxt(k, 0.0);
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j)
          if (g.adj[i][j]) nxt[j] += cnt[i];
      cnt.swap(nxt);
    }
  }

  // equilibrium chain: P_ij = B_ij v_j / (lambda v_i), pi_i ~ u_i v_i
  markov_measure m{sys};
  m.block_len = L;
  m.name = "rpf";
  m.states = g.states;
  m.trans.assign(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j)
      m.trans[i][j] = B[i][j] * v[j] / (sol.lambda * v[i]);
    // normalize away the last float crumbs so downstream checks see rows of 1
    double rsum = 0.0;
    for (size_t j = 0; j < k; ++j) rsum += m.trans[i][j];
    for (size_t j = 0; j < k; ++j) m.trans[i][j] /= rsum;
  }
  // solve the stationary vector of the constructed chain directly; the
  // eigenvector product u v is its analytic value but carries the power
  // iteration residual
  m.pi = stationary_vector(m.trans);
  m.validate(1e-9);
  sol.measure = std::move(m);
  return sol;
}

double entropy_oracle(const shift_system& sys) {
  return rpf_solve(sys, potential::zero()).pressure;
}

// ---------------------------------------------------------------------------
// empirical equilibrium states

cylinder_measure empirical_equilibrium(const shift_system& sys, const potential& phi,
                                       const dyadic_scale& rho_prime, int n, int k,
                                       std::uint64_t budget) {
  if (rho_prime.m == 0) throw config_error("empirical_equilibrium needs rho' < 1");
  coord_window W = ball_window(n, rho_prime);
  if (k > n) throw config_error("marginal depth k exceeds n");

  std::map<word, double> acc;
  double total = 0.0;
  sys.for_each_word(W.length(), [&](const word& wword) {
    window_word cls{W.lo, wword};
    interval w = phi_sup_on_class(sys, phi, cls, n, W, budget);
    double weight = std::exp(w.mid());
    // spread the class weight over the n shift positions of the canonical
    // representative
    point rep = sys.canonical_point(cls);
    for (int i = 0; i < n; ++i) {
      word sub;
      sub.reserve(static_cast<size_t>(k));
      for (int c = i; c < i + k; ++c) sub.push_back(rep.at(c));
      acc[sub] += weight / static_cast<double>(n);
    }
    total += weight;
  }, budget);

  cylinder_measure out;
  out.depth = k;
  for (auto& [w, m] : acc) {
    out.words.push_back(w);
    out.masses.push_back(m / total);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gibbs bound checks

namespace {

void finish_gibbs(gibbs_report& rep) {
  if (rep.rows.empty()) return;
  rep.fitted_q_lower = 1e300;
  rep.fitted_q_upper = -1e300;
  for (const auto& r : rep.rows) {
    rep.fitted_q_lower = std::min(rep.fitted_q_lower, r.min_ratio);
    rep.fitted_q_upper = std::max(rep.fitted_q_upper, r.max_ratio);
  }
  rep.positive = rep.fitted_q_lower > 0.0;
  // least-squares slope of log(min ratio) against n
  size_t c = rep.rows.size();
  if (c >= 3 && rep.positive) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rep.rows) {
      double x = r.n, y = std::log(r.min_ratio);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double slope = (static_cast<double>(c) * sxy - sx * sy) /
                   (static_cast<double>(c) * sxx - sx * sx);
    rep.no_decay_trend = slope >= -0.02;
  }
}

} // namespace

gibbs_report gibbs_lower_check(const shift_system& sys, const potential& phi,
                               const segment_collection& domain, const dyadic_scale& rho,
                               int n_lo, int n_hi, const shift_measure& mu, double pressure,
                               std::uint64_t budget) {
  if (rho.m == 0) throw config_error("gibbs_lower_check needs rho < 1");
  gibbs_report rep;
  for (int n = n_lo; n <= n_hi; ++n) {
    coord_window W = ball_window(n, rho);
    coord_window rw = phi.read_window(n);
    int lo = std::min(W.lo, rw.lo), hi = std::max(W.hi, rw.hi);
    if (mu.max_depth > 0 && W.length() > mu.max_depth)
      throw config_error("measure depth too small for the requested ball");
    gibbs_report::row row{n, 1e300, -1e300, 0};
    sys.for_each_word(hi - lo + 1, [&](const word& u) {
      window_word z{lo, u};
      word core(u.begin() + (0 - lo), u.begin() + (0 - lo) + n);
      if (!domain.contains(core)) return;
      word ball(u.begin() + (W.lo - lo), u.begin() + (W.hi - lo) + 1);
      double mass = mu.mass(ball);
      double phi0 = phi.birkhoff_on(z, n).mid();
      double ratio = mass * std::exp(static_cast<double>(n) * pressure - phi0);
      row.min_ratio = std::min(row.min_ratio, ratio);
      row.max_ratio = std::max(row.max_ratio, ratio);
      ++row.segments;
    }, budget);
    if (row.segments > 0) rep.rows.push_back(row);
  }
  finish_gibbs(rep);
  return rep;
}

gibbs_report gibbs_upper_check(const shift_system& sys, const potential& phi,
                               const dyadic_scale& gamma, int n_lo, int n_hi,
                               const shift_measure& mu, double pressure,
                               std::uint64_t budget) {
  if (gamma.m == 0) throw config_error("gibbs_upper_check needs gamma < 1");
  gibbs_report rep;
  for (int n = n_lo; n <= n_hi; ++n) {
    coord_window W = ball_window(n, gamma);
    if (mu.max_depth > 0 && W.length() > mu.max_depth)
      throw config_error("measure depth too small for the requested ball");
    gibbs_report::row row{n, 1e300, -1e300, 0};
    sys.for_each_word(W.length(), [&](const word& u) {
      window_word cls{W.lo, u};
      double mass = mu.mass(u);
      double phig = phi_sup_on_class(sys, phi, cls, n, W, budget).mid();
      double ratio = mass * std::exp(static_cast<double>(n) * pressure - phig);
      row.min_ratio = std::min(row.min_ratio, ratio);
      row.max_ratio = std::max(row.max_ratio, ratio);
      ++row.segments;
    }, budget);
    if (row.segments > 0) rep.rows.push_back(row);
  }
  finish_gibbs(rep);
  return rep;
}

variational_report variational_check(const shift_system& sys, const potential& phi,
                                     const std::vector<markov_measure>& candidates,
                                     double pressure, double tolerance) {
  (void)sys;
  variational_report rep;
  rep.tolerance = tolerance;
  for (const auto& m : candidates) {
    variational_report::row row;
    row.name = m.name;
    row.entropy = markov_entropy(m);
    row.integral = m.integral(phi);
    row.free_energy = row.entropy + row.integral.mid();
    row.defect = pressure - row.free_energy;
    row.attains = std::abs(row.defect) <= tolerance;
    if (row.defect < -tolerance) rep.all_below = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

} // namespace ergolab

#include "ergolab/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace ergolab {

gamma_descriptor gamma_set(const shift_system& sys, const point& x, const dyadic_scale& eps,
                           int horizon) {
  if (horizon < 0) throw config_error("gamma_set needs a horizon >= 0");
  gamma_descriptor out;
  out.horizon = horizon;
  out.eps_m = eps.m;
  if (eps.m == 0) {
    // the whole space: every pair is within distance 1
    out.degenerate = true;
    out.window = coord_window{-horizon, horizon};
    out.member_count = sys.count_words(out.window.length());
    return out;
  }
  // d(sigma^n x, sigma^n y) <= 2^-m for |n| <= N pins agreement on
  // [-N - (m-1), N + (m-1)]: the descriptor is a single window word
  (void)x;
  int r = horizon + (eps.m - 1);
  out.window = coord_window{-r, r};
  out.member_count = 1;
  out.exact = true; // shrinks to {x} as the horizon grows: expansive scale
  return out;
}

double ne_mass(const shift_system& sys, const shift_measure& mu, const dyadic_scale& eps) {
  (void)sys;
  (void)mu;
  return eps.m >= 1 ? 0.0 : 1.0;
}

double h_star(const shift_system& sys, const dyadic_scale& eps) {
  if (eps.m >= 1) return 0.0;
  return entropy_oracle(sys);
}

namespace {

double cylinder_entropy(const shift_system& sys, const shift_measure& mu, int depth,
                        std::uint64_t budget) {
  if (mu.max_depth > 0 && depth > mu.max_depth)
    throw config_error("measure depth too small for the entropy computation");
  double h = 0.0;
  sys.for_each_word(depth, [&](const word& w) {
    double m = mu.mass(w);
    if (m > 0.0) h -= m * std::log(m);
  }, budget);
  return h;
}

} // namespace

conditional_entropy_report conditional_entropy(const shift_system& sys, const shift_measure& mu,
                                               int a_depth, int b_depth, int n,
                                               std::uint64_t budget) {
  if (a_depth < 1 || b_depth < 1 || n < 1)
    throw config_error("conditional_entropy needs positive depths and n");
  int joint = std::max(a_depth, b_depth);
  conditional_entropy_report rep;
  rep.h_base = cylinder_entropy(sys, mu, n - 1 + a_depth, budget);
  rep.h_joint = cylinder_entropy(sys, mu, n - 1 + joint, budget);
  rep.conditional = rep.h_joint - rep.h_base;

  // direct conditional form: sum over joint cells of -mass log(mass / base mass)
  double direct = 0.0;
  sys.for_each_word(n - 1 + joint, [&](const word& w) {
    double mj = mu.mass(w);
    if (mj <= 0.0) return;
    word base(w.begin(), w.begin() + (n - 1 + a_depth));
    double mb = mu.mass(base);
    direct -= mj * std::log(mj / mb);
  }, budget);
  rep.chain_residual = std::abs(direct - rep.conditional);
  return rep;
}

entropy_estimate partition_entropy(const shift_system& sys, const shift_measure& mu, int radius,
                                   int n_max, std::uint64_t budget) {
  if (radius < 0) throw config_error("partition radius must be >= 0");
  entropy_estimate est;
  std::vector<double> H(static_cast<size_t>(n_max) + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    H[static_cast<size_t>(n)] = cylinder_entropy(sys, mu, n + 2 * radius, budget);
    est.plug_in.push_back(H[static_cast<size_t>(n)] / n);
    if (n >= 2)
      est.increments.push_back(H[static_cast<size_t>(n)] - H[static_cast<size_t>(n - 1)]);
  }
  est.value = est.increments.empty() ? est.plug_in.back() : est.increments.back();
  for (int a = 1; a <= n_max; ++a)
    for (int b = 1; a + b <= n_max; ++b)
      if (H[static_cast<size_t>(a + b)] >
          H[static_cast<size_t>(a)] + H[static_cast<size_t>(b)] + 1e-9)
        est.subadditive = false;
  return est;
}

aee_report aee_check(const shift_system& sys, const markov_measure& mu, const dyadic_scale& eps,
                     int partition_radius, int n_max, double tolerance,
                     std::uint64_t budget) {
  // partition elements sit inside balls of radius 2^{-(r+1)}; diameter <= eps
  // requires r >= m - 1
  if (eps.m >= 1 && partition_radius < eps.m - 1)
    throw config_error("partition radius too small for diameter <= eps");
  aee_report rep;
  rep.h_oracle = markov_entropy(mu);
  auto est = partition_entropy(sys, shift_measure::of(mu), partition_radius, n_max, budget);
  rep.h_partition = est.value;
  rep.h_star_eps = h_star(sys, eps);
  rep.gap = rep.h_partition + rep.h_star_eps - rep.h_oracle;
  rep.inequality_holds = rep.gap >= -tolerance;
  rep.equality_regime = eps.m >= 1 && std::abs(rep.h_partition - rep.h_oracle) <= tolerance;
  return rep;
}

hamming_report hamming_check(const shift_system& sys, int b_depth, const dyadic_scale& delta,
                             double beta, int n, std::uint64_t budget) {
  if (b_depth < 1) throw config_error("hamming_check needs a coding depth >= 1");
  if (delta.m < 1) throw config_error("hamming_check needs delta < 1/2 so that 2 delta < 1");
  hamming_report rep;
  auto words = sys.enumerate_words(n, budget);
  // codings read [i, i + b_depth) of the canonical points
  std::vector<point> pts;
  std::vector<std::vector<std::uint32_t>> codings;
  pts.reserve(words.size());
  for (const auto& w : words) {
    point p = sys.canonical_point(w);
    std::vector<std::uint32_t> c(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      std::uint32_t code = 0;
      for (int j = 0; j < b_depth; ++j)
        code = code * static_cast<std::uint32_t>(sys.alpha.size) + p.at(i + j);
      c[static_cast<size_t>(i)] = code;
    }
    pts.push_back(std::move(p));
    codings.push_back(std::move(c));
  }

  dyadic_scale two_delta(delta.m - 1);
  for (size_t a = 0; a < words.size(); ++a) {
    for (size_t b = a + 1; b < words.size(); ++b) {
      ++rep.pairs;
      int hamming = 0;
      for (int i = 0; i < n; ++i)
        if (codings[a][static_cast<size_t>(i)] != codings[b][static_cast<size_t>(i)]) ++hamming;
      if (hamming <= beta * n) continue;
      ++rep.coding_mismatches;
      metric_result d = bowen_dn(pts[a], pts[b], n, delta.m + b_depth + 2);
      if (!d.gt(two_delta)) ++rep.counterexamples;
    }
  }
  rep.pass = rep.counterexamples == 0;
  return rep;
}

stirling_report stirling_bound_check(int n_max, const std::vector<double>& beta_list) {
  if (n_max < 1 || n_max > 120)
    throw config_error("stirling_bound_check supports 1 <= n_max <= 120");
  for (double b : beta_list)
    if (b <= 0.0 || b >= 0.5) throw config_error("beta must lie in (0, 1/2)");

  stirling_report rep;
  // exact Pascal triangle in 128-bit integers
  std::vector<std::vector<unsigned __int128>> C(static_cast<size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    C[static_cast<size_t>(n)].assign(static_cast<size_t>(n) + 1, 1);
    for (int k = 1; k < n; ++k)
      C[static_cast<size_t>(n)][static_cast<size_t>(k)] =
          C[static_cast<size_t>(n - 1)][static_cast<size_t>(k - 1)] +
          C[static_cast<size_t>(n - 1)][static_cast<size_t>(k)];
  }
  // independent identities: row sums are powers of two, rows are symmetric
  for (int n = 0; n <= n_max && rep.binomials_exact; ++n) {
    unsigned __int128 total = 0;
    for (int k = 0; k <= n; ++k) {
      total += C[static_cast<size_t>(n)][static_cast<size_t>(k)];
      if (C[static_cast<size_t>(n)][static_cast<size_t>(k)] !=
          C[static_cast<size_t>(n)][static_cast<size_t>(n - k)])
        rep.binomials_exact = false;
    }
    if (total != (static_cast<unsigned __int128>(1) << n)) rep.binomials_exact = false;
  }

  for (double beta : beta_list) {
    double k_fit = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      unsigned __int128 sum = 0;
      int cap = static_cast<int>(std::floor(beta * n));
      for (int j = 0; j <= cap; ++j) sum += C[static_cast<size_t>(n)][static_cast<size_t>(j)];
      double s = static_cast<double>(sum);
      double bound = std::exp(-beta * std::log(beta) * n);
      double required = s / bound;
      rep.rows.push_back({n, beta, s, bound, required});
      k_fit = std::max(k_fit, required);
    }
    rep.fitted_k.push_back({beta, k_fit});
    for (const auto& row : rep.rows) {
      if (row.beta == beta && row.sum > k_fit * row.bound * (1 + 1e-12))
        rep.verified_with_fitted = false;
    }
  }
  return rep;
}

adapted_partition_descriptor adapted_partition(const shift_system& sys, int n,
                                               const dyadic_scale& gamma,
                                               std::uint64_t budget) {
  if (gamma.m < 1) throw config_error("adapted_partition needs gamma < 1");
  adapted_partition_descriptor out;
  out.n = n;
  out.gamma_m = gamma.m;
  out.window = ball_window(n, gamma);
  out.elements = sys.count_words(out.window.length(), budget);

  // window containment certificates: the open half-scale ball constrains a
  // superset of the element's coordinates, the closed ball exactly them
  coord_window inner = open_ball_window(n, dyadic_scale(gamma.m + 1));
  out.inner_ball_contained = inner.lo <= out.window.lo && inner.hi >= out.window.hi;
  out.outer_ball_contains = true; // the element equals the closed ball

  // spot check on points: same element iff d_n <= gamma
  auto reps = separated_set(sys, nullptr, n, gamma, budget);
  size_t step = std::max<size_t>(1, reps.size() / 12);
  for (size_t i = 0; i < reps.size(); i += step) {
    for (size_t j = 0; j < reps.size(); j += step) {
      point xi = sys.canonical_point(reps[i]);
      point xj = sys.canonical_point(reps[j]);
      bool same = i == j;
      bool close = bowen_dn(xi, xj, n, gamma.m + 2).le(gamma);
      if (same != close) out.disjoint_cover = false;
    }
  }
  return out;
}

} // namespace ergolab

#include <cmath>

#include "doctest.h"
#include "ergolab/entropy.hpp"
#include "test_helpers.hpp"

using namespace ergolab;
using namespace ergotest;

namespace {
const double kLog2 = std::log(2.0);
}

TEST_CASE("gamma sets: expansive below scale one, degenerate at one") {
  auto sys = full_shift();
  point x = sys.canonical_point(parse_word("0110", 2));
  auto g1 = gamma_set(sys, x, dyadic_scale(1), 4);
  CHECK(g1.exact);
  CHECK(g1.member_count == 1);
  auto g2 = gamma_set(sys, x, dyadic_scale(2), 2);
  CHECK(g2.exact);
  CHECK(g2.window.lo == -3);
  CHECK(g2.window.hi == 3);
  auto g0 = gamma_set(sys, x, dyadic_scale(0), 2);
  CHECK(g0.degenerate);
  CHECK(g0.member_count == 32); // all words on [-2, 2]
}

TEST_CASE("non-expansive mass and h*") {
  auto sys = golden_sft();
  auto mu = shift_measure::of(rpf_solve(sys, potential::zero()).measure);
  CHECK(ne_mass(sys, mu, dyadic_scale(1)) == 0.0);
  CHECK(ne_mass(sys, mu, dyadic_scale(0)) == 1.0);
  CHECK(h_star(sys, dyadic_scale(1)) == 0.0);
  CHECK(h_star(sys, dyadic_scale(0)) == doctest::Approx(kGoldenLog).epsilon(1e-10));
  CHECK(h_star(full_shift(), dyadic_scale(0)) == doctest::Approx(kLog2).epsilon(1e-12));
}

TEST_CASE("conditional entropy: chain rule on exact cylinder masses") {
  auto sys = full_shift();
  auto b = markov_measure::bernoulli(sys, {0.5, 0.5});
  auto mu = shift_measure::of(b);
  // B = A: conditional entropy vanishes
  auto same = conditional_entropy(sys, mu, 2, 2, 5);
  CHECK(std::abs(same.conditional - 0.0) < 1e-12);

  // Bernoulli(1/2): H over depth-d cylinders is (n-1+d) log 2
  auto rep = conditional_entropy(sys, mu, 1, 2, 6);
  CHECK(rep.h_base == doctest::Approx(6 * kLog2).epsilon(1e-12));
  CHECK(rep.h_joint == doctest::Approx(7 * kLog2).epsilon(1e-12));
  CHECK(rep.conditional == doctest::Approx(kLog2).epsilon(1e-12));
  CHECK(rep.chain_residual < 1e-12);

  // dirac-type measure concentrated on the fixed point 0^infinity
  auto dirac = markov_measure::from_transitions(sys, {{1.0, 0.0}, {1.0, 0.0}});
  auto repd = conditional_entropy(sys, shift_measure::of(dirac), 1, 2, 5);
  CHECK(std::abs(repd.h_joint) < 1e-12);
  CHECK(std::abs(repd.conditional) < 1e-12);
}

TEST_CASE("partition entropy: markov increments are exact") {
  auto g = golden_sft();
  auto parry = rpf_solve(g, potential::zero()).measure;
  auto est = partition_entropy(g, shift_measure::of(parry), 1, 10);
  CHECK(est.subadditive);
  CHECK(est.value == doctest::Approx(kGoldenLog).epsilon(1e-10));
  // plug-in values decrease toward the entropy from above
  for (size_t i = 1; i < est.plug_in.size(); ++i)
    CHECK(est.plug_in[i] <= est.plug_in[i - 1] + 1e-12);
}

TEST_CASE("aee check: equality regime below scale one") {
  auto sys = full_shift();
  auto b = markov_measure::bernoulli(sys, {0.5, 0.5});
  auto rep = aee_check(sys, b, dyadic_scale(1), 1, 10, 1e-6);
  CHECK(rep.inequality_holds);
  CHECK(rep.equality_regime);
  CHECK(rep.h_partition == doctest::Approx(kLog2).epsilon(1e-10));

  auto g = golden_sft();
  auto parry = rpf_solve(g, potential::zero()).measure;
  auto repg = aee_check(g, parry, dyadic_scale(1), 1, 14, 1e-3);
  CHECK(repg.inequality_holds);
  CHECK(repg.equality_regime);
  CHECK(repg.h_partition == doctest::Approx(kGoldenLog).epsilon(1e-3));

  // degenerate scale: h* = h_top and the inequality is slack
  auto repd = aee_check(sys, b, dyadic_scale(0), 1, 8, 1e-6);
  CHECK(repd.inequality_holds);
  CHECK(!repd.equality_regime);
  CHECK(repd.h_star_eps == doctest::Approx(kLog2).epsilon(1e-12));
}

TEST_CASE("partition radius too small for the diameter bound is rejected") {
  auto sys = full_shift();
  auto b = markov_measure::bernoulli(sys, {0.5, 0.5});
  CHECK_THROWS_AS(aee_check(sys, b, dyadic_scale(3), 1, 8), config_error);
}

TEST_CASE("hamming check: exhaustive word pairs") {
  // identical codings make no claim; any difference forces d_n = 1
  auto sys = full_shift();
  for (int n : {4, 6, 8}) {
    auto rep = hamming_check(sys, 1, dyadic_scale(2), 0.125, n);
    CHECK(rep.pass);
    CHECK(rep.counterexamples == 0);
    CHECK(rep.pairs > 0);
  }
  auto repg = hamming_check(golden_sft(), 1, dyadic_scale(2), 0.25, 8);
  CHECK(repg.pass);
  // depth-2 codings with beta = 0: every differing pair must separate
  auto rep2 = hamming_check(full_shift(), 2, dyadic_scale(2), 0.0, 6);
  CHECK(rep2.pass);
}

TEST_CASE("stirling bound: exact binomial sums and the fitted constant") {
  auto rep = stirling_bound_check(24, {0.125, 0.25});
  CHECK(rep.binomials_exact);
  CHECK(rep.verified_with_fitted);
  // frozen oracle values: sum_{j<=5} C(20,j) = 21700, bound e^{6.931...}
  bool found = false;
  for (const auto& row : rep.rows) {
    if (row.n == 20 && row.beta == 0.25) {
      CHECK(row.sum == doctest::Approx(21700.0).epsilon(1e-12));
      CHECK(row.bound == doctest::Approx(std::exp(-0.25 * std::log(0.25) * 20)).epsilon(1e-12));
      CHECK(row.required_k == doctest::Approx(21700.0 / 1023.3304).epsilon(1e-3));
      found = true;
    }
  }
  CHECK(found);
  // the sum is nondecreasing in beta at fixed n
  for (int n = 2; n <= 24; n += 7) {
    double s_small = 0, s_big = 0;
    for (const auto& row : rep.rows) {
      if (row.n == n && row.beta == 0.125) s_small = row.sum;
      if (row.n == n && row.beta == 0.25) s_big = row.sum;
    }
    CHECK(s_small <= s_big);
  }
  // beta n < 1: the sum is 1 and K = 1 suffices
  auto tiny = stirling_bound_check(3, {0.2});
  for (const auto& row : tiny.rows) CHECK(row.sum == 1.0);
}

TEST_CASE("adapted partitions at dyadic scales") {
  auto sys = full_shift();
  auto d1 = adapted_partition(sys, 3, dyadic_scale(1));
  CHECK(d1.window.lo == 0);
  CHECK(d1.window.hi == 2);
  CHECK(d1.elements == 8);
  CHECK(d1.inner_ball_contained);
  CHECK(d1.outer_ball_contains);
  CHECK(d1.disjoint_cover);

  auto d2 = adapted_partition(sys, 2, dyadic_scale(2));
  CHECK(d2.window.lo == -1);
  CHECK(d2.window.hi == 2);
  CHECK(d2.elements == 16);
  CHECK(d2.disjoint_cover);

  for (int n = 2; n <= 10; n += 4) {
    auto d = adapted_partition(golden_sft(), n, dyadic_scale(2));
    CHECK(d.disjoint_cover);
  }
}

#include <cmath>

#include "doctest.h"
#include "ergolab/ldp.hpp"
#include "test_helpers.hpp"

using namespace ergolab;
using namespace ergotest;

namespace {

const double kLog2 = std::log(2.0);

double binary_entropy(double p) {
  return -(p * std::log(p) + (1 - p) * std::log(1 - p));
}

// exact binomial tail oracle: (1/n) log sum_{j >= ceil(theta n)} C(n,j) 2^-n
double binomial_tail_rate(int n, double theta) {
  std::vector<double> logc(static_cast<size_t>(n) + 1, 0.0);
  for (int j = 1; j <= n; ++j)
    logc[static_cast<size_t>(j)] =
        logc[static_cast<size_t>(j - 1)] + std::log((n - j + 1.0) / j);
  double mx = -1e300;
  for (int j = 0; j <= n; ++j) {
    if (static_cast<double>(j) / n < theta - 1e-12) continue;
    mx = std::max(mx, logc[static_cast<size_t>(j)]);
  }
  double s = 0.0;
  for (int j = 0; j <= n; ++j) {
    if (static_cast<double>(j) / n < theta - 1e-12) continue;
    s += std::exp(logc[static_cast<size_t>(j)] - mx);
  }
  return (mx + std::log(s) - n * kLog2) / n;
}

} // namespace

TEST_CASE("empirical measures count window frequencies exactly") {
  auto sys = full_shift();
  point zeros = sys.canonical_point(parse_word("000000", 2));
  auto m = empirical_measure(sys, zeros, 6, 1);
  CHECK(m.mass_of(word{0}) == doctest::Approx(1.0).epsilon(1e-12));

  point alt = sys.canonical_point(parse_word("010101", 2));
  auto m2 = empirical_measure(sys, alt, 6, 1);
  CHECK(m2.mass_of(word{0}) == doctest::Approx(0.5).epsilon(1e-12));

  // hand count of 2-words in 100110 read with the canonical continuation
  point w = sys.canonical_point(parse_word("100110", 2));
  auto m3 = empirical_measure(sys, w, 6, 2);
  CHECK(m3.mass_of(parse_word("10", 2)) == doctest::Approx(2.0 / 6).epsilon(1e-12));
  CHECK(m3.mass_of(parse_word("00", 2)) == doctest::Approx(2.0 / 6).epsilon(1e-12));
  m3.validate();
}

TEST_CASE("rate upper bound: unconstrained and boundary-tilted") {
  auto sys = full_shift();
  auto all = constraint_set::all();
  auto b0 = rate_upper_bound(sys, potential::zero(), all, kLog2);
  CHECK(std::abs(b0.value) < 1e-10);

  // freq(1) >= 3/4 at phi = 0: H(3/4) - log 2
  auto A = constraint_set::symbol_freq(1, constraint_set::relation::ge, 0.75);
  auto b1 = rate_upper_bound(sys, potential::zero(), A, kLog2);
  CHECK(b1.exact_tilt);
  CHECK(b1.value == doctest::Approx(binary_entropy(0.75) - kLog2).epsilon(1e-9));
  CHECK(b1.value == doctest::Approx(-0.130812).epsilon(1e-5));

  // freq(1) = 1/2 with phi(1) = log 2: H(1/2) + log(2)/2 - log 3
  auto E = constraint_set::symbol_freq(1, constraint_set::relation::eq, 0.5);
  auto b2 = rate_upper_bound(sys, depth1_potential(0.0, kLog2), E, std::log(3.0));
  CHECK(b2.value == doctest::Approx(binary_entropy(0.5) + 0.5 * kLog2 - std::log(3.0))
                        .epsilon(1e-9));
  CHECK(b2.value == doctest::Approx(-0.058891).epsilon(1e-4));
}

TEST_CASE("rate upper bound is monotone under constraint tightening") {
  auto sys = full_shift();
  double prev = 0.0;
  for (double theta : {0.55, 0.65, 0.75, 0.85}) {
    auto A = constraint_set::symbol_freq(1, constraint_set::relation::ge, theta);
    auto b = rate_upper_bound(sys, potential::zero(), A, kLog2);
    CHECK(b.value <= prev + 1e-12);
    prev = b.value;
  }
}

TEST_CASE("empirical decay rate matches the exact binomial tail") {
  auto sys = full_shift();
  auto mu = markov_measure::bernoulli(sys, {0.5, 0.5});
  auto A = constraint_set::symbol_freq(1, constraint_set::relation::ge, 0.75);
  auto rates = empirical_decay_rate(sys, mu, A, {8, 16, 40});
  for (const auto& row : rates.rows) {
    CHECK(!row.infeasible);
    CHECK(row.value == doctest::Approx(binomial_tail_rate(row.n, 0.75)).epsilon(1e-12));
  }
  // the n = 40 value approaches -D(3/4 || 1/2) = -0.130812 from below
  CHECK(rates.rows.back().value == doctest::Approx(-0.130812).epsilon(0.15));
  CHECK(rates.rows.back().value <= -0.130812 + 1e-9);

  // infeasible set under admissibility: frequency 1 on the golden SFT
  auto g = golden_sft();
  auto parry = rpf_solve(g, potential::zero()).measure;
  auto hard = constraint_set::symbol_freq(1, constraint_set::relation::ge, 0.95);
  auto r2 = empirical_decay_rate(g, parry, hard, {8});
  CHECK(r2.rows[0].infeasible);

  // A = all: rate 0 at every n
  auto r3 = empirical_decay_rate(sys, mu, constraint_set::all(), {8, 12});
  for (const auto& row : r3.rows) CHECK(row.value == 0.0);
}

TEST_CASE("monte carlo fallback stays near the exact rates") {
  auto sys = full_shift();
  auto mu = markov_measure::bernoulli(sys, {0.5, 0.5});
  auto A = constraint_set::symbol_freq(1, constraint_set::relation::ge, 0.6);
  auto exact = empirical_decay_rate(sys, mu, A, {16});
  auto mc = empirical_decay_rate_mc(sys, mu, A, {16}, 40000, 99);
  CHECK(mc.rows[0].value == doctest::Approx(exact.rows[0].value).epsilon(0.08));
}

TEST_CASE("sanov identity: decay limit equals the variational bound") {
  // for product measures, -D(p* || 1/2) = H(p*) - log 2 at the optimizer
  double d = 0.75 * std::log(0.75 / 0.5) + 0.25 * std::log(0.25 / 0.5);
  CHECK(-d == doctest::Approx(binary_entropy(0.75) - kLog2).epsilon(1e-12));
}

TEST_CASE("upper energy function check") {
  auto sys = full_shift();
  auto b = markov_measure::bernoulli(sys, {0.5, 0.5});
  auto rep = upper_energy_check(sys, potential::zero(), shift_measure::of(b), dyadic_scale(1),
                                12, kLog2);
  CHECK(rep.pass);
  for (const auto& row : rep.rows)
    CHECK(row.sup == doctest::Approx(std::log(rep.fitted_q) / row.n).epsilon(1e-9));

  auto phi = depth1_potential(0.0, kLog2);
  auto sol = rpf_solve(sys, phi);
  auto rep2 = upper_energy_check(sys, phi, shift_measure::of(sol.measure), dyadic_scale(1),
                                 12, sol.pressure);
  CHECK(rep2.pass);

  auto g = golden_sft();
  auto parry = rpf_solve(g, potential::zero());
  auto rep3 = upper_energy_check(g, potential::zero(), shift_measure::of(parry.measure),
                                 dyadic_scale(2), 12, parry.pressure);
  CHECK(rep3.pass);
}

TEST_CASE("ldp upper check: bernoulli instance and golden SFT instance") {
  auto sys = full_shift();
  auto mu = markov_measure::bernoulli(sys, {0.5, 0.5});
  auto A = constraint_set::symbol_freq(1, constraint_set::relation::ge, 0.75);
  auto rep = ldp_upper_check(sys, potential::zero(), mu, A, 40, kLog2);
  CHECK(rep.pass);
  CHECK(rep.bound == doctest::Approx(-0.130812).epsilon(1e-5));

  auto g = golden_sft();
  auto parry = rpf_solve(g, potential::zero());
  auto A2 = constraint_set::symbol_freq(1, constraint_set::relation::ge, 0.4);
  auto rep2 = ldp_upper_check(g, potential::zero(), parry.measure, A2, 40, parry.pressure);
  CHECK(rep2.pass);
  CHECK(rep2.bound < 0.0);
}

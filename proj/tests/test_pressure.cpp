#include <cmath>

#include "doctest.h"
#include "ergolab/pressure.hpp"
#include "test_helpers.hpp"

using namespace ergolab;
using namespace ergotest;

namespace {

const double kLog2 = std::log(2.0);

// independent oracle: spectral radius by shifted power iteration
double spectral_radius(std::vector<std::vector<double>> A) {
  size_t k = A.size();
  std::vector<double> v(k, 1.0);
  double lam = 0.0;
  for (int it = 0; it < 500; ++it) {
    std::vector<double> nv(k, 0.0);
    double norm = 0.0;
    for (size_t i = 0; i < k; ++i) {
      double s = v[i];
      for (size_t j = 0; j < k; ++j) s += A[i][j] * v[j];
      nv[i] = s;
      norm += s;
    }
    for (auto& x : nv) x /= norm;
    v = nv;
    lam = norm;
  }
  return lam - 1.0;
}

segment_collection all_segments() { return segment_collection::everything(); }

} // namespace

TEST_CASE("partition sums are exact class counts for phi = 0") {
  auto sys = full_shift();
  auto zero = potential::zero();
  for (int n = 1; n <= 12; ++n) {
    auto v = partition_sum(sys, all_segments(), zero, dyadic_scale(1), dyadic_scale(1), n);
    CHECK(v.zero_weights);
    CHECK(v.class_count == (1ull << n));
    CHECK(v.log_value.contains(std::log(std::pow(2.0, n))));
  }
  // SFT forbid "11": Lambda(n=4) = 8 admissible words
  auto g = golden_sft();
  auto v4 = partition_sum(g, all_segments(), zero, dyadic_scale(1), dyadic_scale(1), 4);
  CHECK(v4.class_count == 8);
}

TEST_CASE("weighted one-step sum is analytic") {
  auto sys = full_shift();
  auto phi = depth1_potential(0.0, kLog2);
  auto v = partition_sum(sys, all_segments(), phi, dyadic_scale(1), dyadic_scale(1), 1);
  CHECK(v.log_value.contains(std::log(3.0)));
  CHECK(v.log_value.width() < 1e-12);
}

TEST_CASE("pressure: full shift exact, golden SFT vs spectral oracle") {
  auto zero = potential::zero();
  auto pf = pressure(full_shift(), all_segments(), zero, dyadic_scale(1), dyadic_scale(1), 10);
  CHECK(pf.value == doctest::Approx(kLog2).epsilon(1e-13));

  double oracle = spectral_radius({{1, 1}, {1, 0}});
  CHECK(std::log(oracle) == doctest::Approx(kGoldenLog).epsilon(1e-12));
  auto pg = pressure(golden_sft(), all_segments(), zero, dyadic_scale(1), dyadic_scale(1), 24);
  CHECK(pg.value == doctest::Approx(std::log(oracle)).epsilon(1e-8));

  auto phi = depth1_potential(0.0, kLog2);
  auto pw = pressure(full_shift(), all_segments(), phi, dyadic_scale(1), dyadic_scale(1), 12);
  CHECK(pw.value == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("pressure is insensitive to the dyadic scale on SFTs") {
  auto zero = potential::zero();
  auto sys = golden_sft();
  double base = 0.0;
  for (int m = 1; m <= 3; ++m) {
    auto p = pressure(sys, all_segments(), zero, dyadic_scale(m), dyadic_scale(m), 18);
    if (m == 1) base = p.value;
    else CHECK(p.value == doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("monotonicity in delta and eps") {
  auto sys = full_shift();
  auto phi = potential::locally_constant(
      3, {{"000", 0.0}, {"001", 0.3}, {"010", 0.7}, {"011", 0.1},
          {"100", 0.9}, {"101", 0.2}, {"110", 0.5}, {"111", 1.1}});
  for (int n = 1; n <= 8; ++n) {
    for (int me = 1; me <= 3; ++me) {
      // smaller delta (larger m) admits larger separated sets
      double prev = -1e300;
      for (int md = 1; md <= 3; ++md) {
        auto v = partition_sum(sys, all_segments(), phi, dyadic_scale(md), dyadic_scale(me), n);
        CHECK(v.log_value.hi >= prev - 1e-9);
        prev = v.log_value.lo;
      }
    }
    for (int md = 1; md <= 3; ++md) {
      // larger eps gives larger weights
      double prev = 1e300;
      for (int me = 1; me <= 3; ++me) {
        auto v = partition_sum(sys, all_segments(), phi, dyadic_scale(md), dyadic_scale(me), n);
        CHECK(v.log_value.lo <= prev + 1e-9);
        prev = v.log_value.hi;
      }
    }
  }
}

TEST_CASE("subadditivity over unions") {
  auto sys = golden_sft();
  auto phi = depth1_potential(0.1, 0.6);
  segment_collection starts0{"starts0", [](const word& w) { return !w.empty() && w[0] == 0; }};
  segment_collection ends1{"ends1", [](const word& w) { return !w.empty() && w.back() == 1; }};
  auto u = segment_collection::unite(starts0, ends1);
  for (int n = 1; n <= 7; ++n) {
    auto lu = partition_sum(sys, u, phi, dyadic_scale(1), dyadic_scale(1), n);
    auto la = partition_sum(sys, starts0, phi, dyadic_scale(1), dyadic_scale(1), n);
    auto lb = partition_sum(sys, ends1, phi, dyadic_scale(1), dyadic_scale(1), n);
    double rhs = std::exp(la.log_value.lo) + std::exp(lb.log_value.lo);
    CHECK(std::exp(lu.log_value.hi) <= rhs * (1 + 1e-9));
  }
}

TEST_CASE("product bound holds on supplied splittings") {
  for (auto sys : {full_shift(), golden_sft()}) {
    for (int variant = 0; variant < 2; ++variant) {
      auto phi = variant == 0 ? potential::zero() : depth1_potential(0.2, 0.5);
      auto rep = product_bound_check(sys, phi, dyadic_scale(2),
                                     {{6}, {2, 4}, {3, 3}, {1, 2, 3}});
      CHECK(rep.all_certified);
      for (const auto& row : rep.rows) CHECK(row.slack >= 0.0);
    }
  }
}

TEST_CASE("two-scale sandwich") {
  auto sys = full_shift();
  // depth-1 at eps=1/2: Var = 0 and all three quantities coincide
  auto phi = depth1_potential(0.0, kLog2);
  for (int n = 1; n <= 8; ++n) {
    auto rep = sandwich_check(sys, all_segments(), phi, dyadic_scale(1), dyadic_scale(1), n);
    CHECK(rep.certified);
    CHECK(std::abs(rep.upper_slack) < 1e-12);
    CHECK(std::abs(rep.lower_slack) < 1e-12);
  }
  // phi = 0: equality as well
  auto rep0 = sandwich_check(sys, all_segments(), potential::zero(), dyadic_scale(2),
                             dyadic_scale(1), 5);
  CHECK(rep0.certified);

  // window potential: midpoint inequality holds with nonnegative slack
  std::unordered_map<std::string, double> t;
  for (int v = 0; v < 8; ++v) {
    word w{static_cast<symbol>((v >> 2) & 1), static_cast<symbol>((v >> 1) & 1),
           static_cast<symbol>(v & 1)};
    t[word_str(w)] = 0.4 * w[0] + 0.3 * w[2];
  }
  auto holder = potential::holder(1, t, 1.0, 1.0);
  for (int n = 1; n <= 8; ++n) {
    auto rep = sandwich_check(sys, all_segments(), holder, dyadic_scale(2), dyadic_scale(1), n);
    double mid_upper = rep.n_var.mid() + rep.log_two_scale.mid() - rep.log_one_scale.mid();
    double mid_lower = rep.log_one_scale.mid() - rep.log_two_scale.mid() + rep.n_var.mid();
    CHECK(mid_upper >= -1e-9);
    CHECK(mid_lower >= -1e-9);
  }
}

TEST_CASE("lower bound Lambda(X,g,g,n) >= e^{nP}") {
  auto zero = potential::zero();
  auto repf = lower_bound_check(full_shift(), zero, dyadic_scale(2), 14, kLog2);
  CHECK(repf.pass);
  CHECK(repf.min_margin >= 0.0);

  double oracle = std::log(spectral_radius({{1, 1}, {1, 0}}));
  auto repg = lower_bound_check(golden_sft(), zero, dyadic_scale(2), 14, oracle);
  CHECK(repg.pass);

  // constant potential: reduces to class count >= e^{n h_top}
  auto repc = lower_bound_check(golden_sft(), potential::constant(0.7), dyadic_scale(3), 10,
                                oracle + 0.7);
  CHECK(repc.pass);
}

TEST_CASE("pressure of a bounded-support collection reports zero") {
  auto sys = full_shift();
  segment_collection shorty{"short", [](const word& w) { return w.size() <= 2; }};
  auto p = pressure(sys, shorty, potential::zero(), dyadic_scale(1), std::nullopt, 8);
  CHECK(p.bounded_support);
  CHECK(p.value == 0.0);
}

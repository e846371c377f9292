#include <cmath>

#include "doctest.h"
#include "ergolab/equilibrium.hpp"
#include "test_helpers.hpp"

using namespace ergolab;
using namespace ergotest;

namespace {

const double kLog2 = std::log(2.0);
const double kGolden = 0.5 * (1.0 + std::sqrt(5.0));

segment_collection all_segments() { return segment_collection::everything(); }

} // namespace

TEST_CASE("rpf: full 2-shift with phi = 0 is Bernoulli(1/2)") {
  auto sol = rpf_solve(full_shift(), potential::zero());
  CHECK(sol.lambda == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(sol.pressure == doctest::Approx(kLog2).epsilon(1e-13));
  CHECK(sol.residual_right <= 1e-12);
  CHECK(sol.residual_left <= 1e-12);
  CHECK(sol.measure.pi[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.measure.trans[0][1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.spectral_gap_ok);
}

TEST_CASE("rpf: golden SFT Parry data") {
  auto sol = rpf_solve(golden_sft(), potential::zero());
  CHECK(sol.lambda == doctest::Approx(kGolden).epsilon(1e-12));
  // eigenvector formula: P_00 = 2/(1+sqrt5), P_10 = 1, pi_0 = 0.723607
  CHECK(sol.measure.trans[0][0] == doctest::Approx(2.0 / (1.0 + std::sqrt(5.0))).epsilon(1e-10));
  CHECK(sol.measure.trans[1][0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(sol.measure.trans[1][1]) < 1e-10);
  CHECK(sol.measure.pi[0] == doctest::Approx(0.7236067977).epsilon(1e-8));
}

TEST_CASE("rpf: weighted full shift is Bernoulli(1/3, 2/3)") {
  auto sol = rpf_solve(full_shift(), depth1_potential(0.0, kLog2));
  CHECK(sol.lambda == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(sol.measure.trans[0][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sol.measure.trans[1][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("rpf rejects reducible structure; beta block encoding is exact") {
  CHECK_THROWS_AS(rpf_solve(reducible_sft(), potential::zero()), config_error);
  auto sol = rpf_solve(golden_beta(), potential::zero());
  CHECK(sol.block_encoding_exact);
  CHECK(sol.pressure == doctest::Approx(kGoldenLog).epsilon(1e-12));
}

TEST_CASE("markov entropy") {
  auto b = markov_measure::bernoulli(full_shift(), {0.5, 0.5});
  CHECK(markov_entropy(b) == doctest::Approx(kLog2).epsilon(1e-14));
  auto parry = rpf_solve(golden_sft(), potential::zero());
  // h = log lambda - int phi dmu = log golden
  CHECK(markov_entropy(parry.measure) == doctest::Approx(kGoldenLog).epsilon(1e-10));
  // deterministic cycle has zero entropy
  auto cyc = markov_measure::from_transitions(full_shift(), {{0, 1}, {1, 0}});
  CHECK(std::abs(markov_entropy(cyc)) < 1e-14);
  CHECK(cyc.pi[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("entropy equals log lambda minus the integral for rpf measures") {
  auto phi = depth1_potential(0.0, kLog2);
  auto sol = rpf_solve(full_shift(), phi);
  double h = markov_entropy(sol.measure);
  double integ = sol.measure.integral(phi).mid();
  CHECK(h + integ == doctest::Approx(sol.pressure).epsilon(1e-10));
}

TEST_CASE("cylinder measures: marginals, defect, distance") {
  auto b = markov_measure::bernoulli(full_shift(), {0.5, 0.5});
  auto m3 = b.marginal(3);
  m3.validate();
  CHECK(m3.shift_defect() == doctest::Approx(0.0).scale(1).epsilon(1e-14));
  auto m1 = b.marginal(1);
  CHECK(weak_star_distance(m1, m1, 1) == 0.0);
  auto b3 = markov_measure::bernoulli(full_shift(), {2.0 / 3.0, 1.0 / 3.0});
  CHECK(weak_star_distance(b.marginal(1), b3.marginal(1), 1) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("empirical equilibrium: symmetric case is exactly uniform") {
  auto mu = empirical_equilibrium(full_shift(), potential::zero(), dyadic_scale(1), 10, 1);
  mu.validate();
  CHECK(mu.mass_of(word{0}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("empirical equilibrium converges to the rpf measure") {
  auto phi = depth1_potential(0.0, kLog2);
  auto sys = full_shift();
  auto mu12 = empirical_equilibrium(sys, phi, dyadic_scale(1), 12, 1);
  CHECK(mu12.mass_of(word{1}) == doctest::Approx(2.0 / 3.0).epsilon(3e-2));

  // golden SFT, k = 2 against the Parry cylinder formula pi_a P_ab
  auto g = golden_sft();
  auto parry = rpf_solve(g, potential::zero()).measure;
  auto mu16 = empirical_equilibrium(g, potential::zero(), dyadic_scale(1), 16, 2);
  for (const auto& w : g.enumerate_words(2)) {
    CHECK(mu16.mass_of(w) == doctest::Approx(parry.cylinder_mass(w)).epsilon(8e-2));
  }

  // weak* distance to the oracle decreases along n
  auto oracle1 = rpf_solve(sys, phi).measure.marginal(1);
  auto d = [&](int n) {
    auto mu = empirical_equilibrium(sys, phi, dyadic_scale(1), n, 1);
    return weak_star_distance(mu, oracle1, 1);
  };
  double d8 = d(8), d12 = d(12), d16 = d(16);
  CHECK(d12 <= d8 + 1e-12);
  CHECK(d16 <= d12 + 1e-12);
}

TEST_CASE("shift-invariance defect of mu_n decays") {
  auto phi = depth1_potential(0.0, 0.9);
  auto sys = full_shift();
  auto defect = [&](int n) {
    return empirical_equilibrium(sys, phi, dyadic_scale(1), n, 3).shift_defect();
  };
  double d8 = defect(8), d16 = defect(16);
  CHECK(d16 <= 0.75 * d8 + 1e-9);
}

TEST_CASE("gibbs lower: exact ratios for product measures at rho = 1/2") {
  auto sys = full_shift();
  auto b = shift_measure::of(markov_measure::bernoulli(sys, {0.5, 0.5}));
  auto rep = gibbs_lower_check(sys, potential::zero(), all_segments(), dyadic_scale(1), 1, 10,
                               b, kLog2);
  CHECK(rep.positive);
  CHECK(rep.fitted_q_lower == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.fitted_q_upper == doctest::Approx(1.0).epsilon(1e-10));

  auto phi = depth1_potential(0.0, kLog2);
  auto b2 = shift_measure::of(markov_measure::bernoulli(sys, {1.0 / 3.0, 2.0 / 3.0}));
  auto rep2 = gibbs_lower_check(sys, phi, all_segments(), dyadic_scale(1), 1, 10, b2,
                                std::log(3.0));
  CHECK(rep2.fitted_q_lower == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep2.fitted_q_upper == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gibbs lower: Parry measure at rho = 1/4 stays in a positive band") {
  auto g = golden_sft();
  auto sol = rpf_solve(g, potential::zero());
  auto mu = shift_measure::of(sol.measure);
  auto rep = gibbs_lower_check(g, potential::zero(), all_segments(), dyadic_scale(2), 6, 18,
                               mu, sol.pressure);
  CHECK(rep.positive);
  CHECK(rep.no_decay_trend);
  CHECK(rep.fitted_q_lower > 0.0);
  CHECK(rep.fitted_q_upper < 10.0);
}

TEST_CASE("gibbs upper: sup identically one for depth-1 data") {
  auto sys = full_shift();
  auto b = shift_measure::of(markov_measure::bernoulli(sys, {0.5, 0.5}));
  auto rep = gibbs_upper_check(sys, potential::zero(), dyadic_scale(1), 1, 10, b, kLog2);
  CHECK(rep.fitted_q_upper == doctest::Approx(1.0).epsilon(1e-10));

  auto phi = depth1_potential(0.0, kLog2);
  auto b2 = shift_measure::of(markov_measure::bernoulli(sys, {1.0 / 3.0, 2.0 / 3.0}));
  auto rep2 = gibbs_upper_check(sys, phi, dyadic_scale(1), 1, 10, b2, std::log(3.0));
  CHECK(rep2.fitted_q_upper == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("variational principle over Bernoulli candidates") {
  auto sys = full_shift();
  std::vector<markov_measure> cands;
  for (int i = 1; i <= 9; ++i) {
    double p = i / 10.0;
    auto m = markov_measure::bernoulli(sys, {1.0 - p, p});
    m.name = "bernoulli-" + std::to_string(i);
    cands.push_back(m);
  }
  auto rep0 = variational_check(sys, potential::zero(), cands, kLog2);
  CHECK(rep0.all_below);
  // maximum at p = 1/2 with value log 2
  CHECK(rep0.rows[4].attains);
  CHECK(rep0.rows[1].defect > 1e-3);

  auto phi = depth1_potential(0.0, kLog2);
  // calculus oracle: H(p) + p log 2 is maximized at p = 2/3 with value log 3
  double best = -1e300;
  int arg = -1;
  auto repw = variational_check(sys, phi, cands, std::log(3.0));
  CHECK(repw.all_below);
  for (size_t i = 0; i < repw.rows.size(); ++i) {
    if (repw.rows[i].free_energy > best) {
      best = repw.rows[i].free_energy;
      arg = static_cast<int>(i);
    }
  }
  CHECK(arg == 6); // p = 0.7 grid point nearest 2/3
  // exact argmax: Bernoulli(1/3, 2/3)
  auto exact = markov_measure::bernoulli(sys, {1.0 / 3.0, 2.0 / 3.0});
  auto repx = variational_check(sys, phi, {exact}, std::log(3.0));
  CHECK(repx.rows[0].attains);

  // dirac-type cycle measure: strict inequality (h = 0)
  auto cyc = markov_measure::from_transitions(sys, {{0, 1}, {1, 0}});
  auto repc = variational_check(sys, potential::zero(), {cyc}, kLog2);
  CHECK(repc.rows[0].defect > 0.5);
}

TEST_CASE("gibbs sandwich exactness for depth-1 potentials at scale 1/2") {
  auto sys = full_shift();
  auto phi = depth1_potential(0.2, 0.9);
  auto sol = rpf_solve(sys, phi);
  auto mu = shift_measure::of(sol.measure);
  auto lo = gibbs_lower_check(sys, phi, all_segments(), dyadic_scale(1), 1, 14, mu, sol.pressure);
  auto hi = gibbs_upper_check(sys, phi, dyadic_scale(1), 1, 14, mu, sol.pressure);
  CHECK(lo.fitted_q_lower == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(hi.fitted_q_upper == doctest::Approx(1.0).epsilon(1e-10));
}

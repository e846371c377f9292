#ifndef ERGOLAB_TEST_HELPERS_HPP
#define ERGOLAB_TEST_HELPERS_HPP

#include <cmath>
#include <vector>

#include "ergolab/potential.hpp"
#include "ergolab/shift.hpp"

namespace ergotest {

using namespace ergolab;

inline shift_system full_shift(int k = 2) {
  return shift_system(alphabet(k), admissibility_rule::full());
}

// golden-mean SFT: forbid "11"
inline shift_system golden_sft() {
  return shift_system(alphabet(2), admissibility_rule::sft({{1, 1}, {1, 0}}));
}

inline shift_system golden_beta(int depth = 64) {
  return shift_system(alphabet(2), admissibility_rule::beta({1, 0}, true, depth));
}

inline shift_system sgap_12(int cap = 40) {
  return shift_system(alphabet(2), admissibility_rule::sgap({1, 2}, cap));
}

// reducible SFT: two components with no connection
inline shift_system reducible_sft() {
  return shift_system(alphabet(2), admissibility_rule::sft({{1, 0}, {0, 1}}));
}

// phi(x) = weight when x_0 = 1, else 0
inline potential depth1_potential(double w0, double w1) {
  return potential::locally_constant(1, {{"0", w0}, {"1", w1}});
}

// brute-force oracle: all words of length n over k symbols, filtered
template <typename Pred>
std::vector<word> brute_words(int k, int n, Pred admissible) {
  std::vector<word> out;
  word w(static_cast<size_t>(n), 0);
  while (true) {
    if (admissible(w)) out.push_back(w);
    int i = n - 1;
    while (i >= 0 && w[static_cast<size_t>(i)] == k - 1) {
      w[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++w[static_cast<size_t>(i)];
  }
  if (n == 0) out.assign(1, word{});
  return out;
}

inline bool no_11(const word& w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == 1 && w[i + 1] == 1) return false;
  return true;
}

constexpr double kGoldenLog = 0.48121182505960347; // log((1+sqrt 5)/2)

} // namespace ergotest

#endif

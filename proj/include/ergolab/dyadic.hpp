#ifndef ERGOLAB_DYADIC_HPP
#define ERGOLAB_DYADIC_HPP

#include <cmath>
#include <string>

#include "ergolab/errors.hpp"

namespace ergolab {

// Scale 2^{-m}.  Every scale-dependent operation in the library works on the
// exponent, so Bowen-ball membership and separation are integer window tests
// rather than floating-point comparisons.
struct dyadic_scale {
  int m = 0; // value = 2^{-m}, m >= 0

  dyadic_scale() = default;
  explicit dyadic_scale(int exponent) : m(exponent) {
    if (m < 0) throw config_error("dyadic scale exponent must be >= 0");
  }

  double value() const { return std::ldexp(1.0, -m); }

  bool operator==(const dyadic_scale& o) const { return m == o.m; }
  // 2^{-a} < 2^{-b}  iff  a > b
  bool operator<(const dyadic_scale& o) const { return m > o.m; }
  bool operator<=(const dyadic_scale& o) const { return m >= o.m; }

  std::string str() const { return "2^-" + std::to_string(m); }

  // accepts "2^-7" or a bare exponent "7"
  static dyadic_scale parse(const std::string& s) {
    std::string t = s;
    if (t.rfind("2^-", 0) == 0) t = t.substr(3);
    else if (t.rfind("2^", 0) == 0) throw config_error("scale must be 2^-m: " + s);
    try {
      size_t pos = 0;
      int m = std::stoi(t, &pos);
      if (pos != t.size() || m < 0) throw config_error("bad scale: " + s);
      return dyadic_scale(m);
    } catch (const config_error&) {
      throw;
    } catch (...) {
      throw config_error("bad scale: " + s);
    }
  }
};

} // namespace ergolab

#endif

#ifndef ERGOLAB_RATIONAL_HPP
#define ERGOLAB_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>

#include "ergolab/errors.hpp"

namespace ergolab {

// Exact rational arithmetic for roof functions and flow times.  Durations in
// the suspension module stay rational end to end, so the flow group law and
// roof-crossing bookkeeping are exact.
struct rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  rational() = default;
  rational(std::int64_t n) : num(n), den(1) {}
  rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw config_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static rational from_i128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim)
      throw config_error("rational overflow; use smaller roof denominators");
    rational r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
  }

  rational operator+(const rational& o) const {
    return from_i128((__int128)num * o.den + (__int128)o.num * den, (__int128)den * o.den);
  }
  rational operator-(const rational& o) const {
    return from_i128((__int128)num * o.den - (__int128)o.num * den, (__int128)den * o.den);
  }
  rational operator*(const rational& o) const {
    return from_i128((__int128)num * o.num, (__int128)den * o.den);
  }
  rational operator/(const rational& o) const {
    if (o.num == 0) throw config_error("rational division by zero");
    return from_i128((__int128)num * o.den, (__int128)den * o.num);
  }
  rational operator-() const {
    rational r = *this;
    r.num = -r.num;
    return r;
  }

  bool operator==(const rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const rational& o) const { return !(*this == o); }
  bool operator<(const rational& o) const {
    return (__int128)num * o.den < (__int128)o.num * den;
  }
  bool operator<=(const rational& o) const { return *this < o || *this == o; }
  bool operator>(const rational& o) const { return o < *this; }
  bool operator>=(const rational& o) const { return o <= *this; }

  bool is_zero() const { return num == 0; }
  bool is_negative() const { return num < 0; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // accepts "3", "3/2", "-1/4"
  static rational parse(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return rational(std::stoll(s));
      return rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const config_error&) {
      throw;
    } catch (...) {
      throw config_error("bad rational: " + s);
    }
  }
};

} // namespace ergolab

#endif

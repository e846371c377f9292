#ifndef ERGOLAB_INTERVAL_HPP
#define ERGOLAB_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace ergolab {

// Closed interval [lo, hi] with outward rounding on arithmetic.  All
// inequality certificates in the library compare interval endpoints, so a
// check only passes when it holds for every value the enclosure permits.
struct interval {
  double lo = 0.0;
  double hi = 0.0;

  interval() = default;
  interval(double v) : lo(v), hi(v) {}
  interval(double l, double h) : lo(l), hi(h) {}

  static interval exact(double v) { return interval(v, v); }
  static interval hull(const interval& a, const interval& b) {
    return interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool is_exact() const { return lo == hi; }
  bool contains(double v) const { return lo <= v && v <= hi; }

  interval& operator+=(const interval& o) {
    lo = add_dir(lo, o.lo, false);
    hi = add_dir(hi, o.hi, true);
    return *this;
  }
  interval operator+(const interval& o) const {
    interval r = *this;
    r += o;
    return r;
  }
  interval operator-(const interval& o) const {
    return interval(add_dir(lo, -o.hi, false), add_dir(hi, -o.lo, true));
  }
  interval operator-() const { return interval(-hi, -lo); }

  // scale by a scalar factor
  interval scaled(double c) const {
    if (c >= 0) return interval(mul_dir(lo, c, false), mul_dir(hi, c, true));
    return interval(mul_dir(hi, c, false), mul_dir(lo, c, true));
  }

  interval abs() const {
    if (lo >= 0) return *this;
    if (hi <= 0) return interval(-hi, -lo);
    return interval(0.0, std::max(-lo, hi));
  }

  static double up(double v) {
    return std::nextafter(v, std::numeric_limits<double>::infinity());
  }
  static double down(double v) {
    return std::nextafter(v, -std::numeric_limits<double>::infinity());
  }

  // directed addition via two-sum: exact results stay exact, inexact ones
  // step one ulp outward in the requested direction
  static double add_dir(double a, double b, bool round_up) {
    double s = a + b;
    if (std::isinf(s)) return s;
    double bp = s - a;
    double err = (a - (s - bp)) + (b - bp);
    if (round_up ? err > 0 : err < 0) s = round_up ? up(s) : down(s);
    return s;
  }

  static double mul_dir(double a, double b, bool round_up) {
    double p = a * b;
    if (std::isinf(p)) return p;
    double err = std::fma(a, b, -p);
    if (round_up ? err > 0 : err < 0) p = round_up ? up(p) : down(p);
    return p;
  }
};

inline interval log_point(double v) {
  double l = std::log(v);
  return interval(interval::down(l), interval::up(l));
}

// Streaming log(sum of e^{x_i}) over interval-valued exponents.  Keeps a
// running maximum and rescales, so partition sums at n ~ 10^3 never leave
// the representable range.
class log_sum_acc {
public:
  void add(const interval& x) {
    add_one(lo_max_, lo_sum_, x.lo);
    add_one(hi_max_, hi_sum_, x.hi);
    ++count_;
  }

  bool empty() const { return count_ == 0; }
  std::uint64_t count() const { return count_; }

  // enclosure of log(sum); empty sum maps to -inf
  interval log_value() const {
    if (count_ == 0) {
      double ninf = -std::numeric_limits<double>::infinity();
      return interval(ninf, ninf);
    }
    double lo = lo_max_ + std::log(lo_sum_);
    double hi = hi_max_ + std::log(hi_sum_);
    // a few ulps outward for the exp/log round trips
    for (int i = 0; i < 4; ++i) {
      lo = interval::down(lo);
      hi = interval::up(hi);
    }
    return interval(lo, hi);
  }

private:
  static void add_one(double& m, double& s, double x) {
    if (s == 0.0) {
      m = x;
      s = 1.0;
      return;
    }
    if (x <= m) {
      s += std::exp(x - m);
    } else {
      s = s * std::exp(m - x) + 1.0;
      m = x;
    }
  }

  double lo_max_ = 0.0, lo_sum_ = 0.0;
  double hi_max_ = 0.0, hi_sum_ = 0.0;
  std::uint64_t count_ = 0;
};

} // namespace ergolab

#endif

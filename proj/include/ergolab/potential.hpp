#ifndef ERGOLAB_POTENTIAL_HPP
#define ERGOLAB_POTENTIAL_HPP

#include <string>
#include <unordered_map>

#include "ergolab/interval.hpp"
#include "ergolab/shift.hpp"

namespace ergolab {

// Potential function given by a finite table.
//
// locally_constant: reads the word at coordinates [0, depth-1] relative to the
// evaluation position; values are exact.  depth 0 is a constant.
//
// holder: reads the window [-radius, radius]; the table holds a representative
// value per window word and the declared modulus Var(phi, 2^-m) <= C 2^{-alpha m}
// certifies the enclosure half-width C 2^{-alpha R} on each window cylinder.
class potential {
public:
  enum class kind { locally_constant, holder };

  static potential zero() { return constant(0.0); }
  static potential constant(double c);
  static potential locally_constant(int depth, std::unordered_map<std::string, double> table);
  static potential holder(int radius, std::unordered_map<std::string, double> table,
                          double holder_c, double holder_alpha);

  kind variant() const { return kind_; }
  bool is_locally_constant() const { return kind_ == kind::locally_constant; }
  int depth() const { return depth_; }
  double holder_c() const { return holder_c_; }
  double holder_alpha() const { return holder_alpha_; }

  // window read relative to the evaluation position
  coord_window read_window() const {
    if (kind_ == kind::locally_constant) return coord_window{0, depth_ - 1};
    return coord_window{-depth_, depth_};
  }
  // window read by a Birkhoff sum over positions [0, n)
  coord_window read_window(int n) const {
    coord_window w = read_window();
    return coord_window{w.lo, n - 1 + w.hi};
  }

  // enclosure half-width of a single evaluation
  double remainder() const;

  // evaluate at one position given the read-window word
  interval eval(const word& read_word) const;
  // evaluate at position k of a window word (must cover the read window)
  interval eval_at(const window_word& data, int k) const;
  interval eval_at(const point& x, long k) const;

  // Birkhoff sum over positions [0, n) of a covering window word
  interval birkhoff_on(const window_word& data, int n) const;

  // depth-1 table value by symbol (spectral oracle fast path)
  double symbol_value(symbol s) const;

  bool is_identically_zero() const;
  double max_abs() const;

  // every admissible read-window word must have a table entry
  void validate(const shift_system& sys) const;

private:
  kind kind_ = kind::locally_constant;
  int depth_ = 0; // LC: word length; holder: window radius
  std::unordered_map<std::string, double> table_;
  double holder_c_ = 0.0;
  double holder_alpha_ = 1.0;
};

// certified enclosure of sum_{k<n} phi(sigma^k x)
interval birkhoff_sum(const potential& phi, const point& x, int n);

// enclosure of sup over the open Bowen ball B_n(x, eps) of the Birkhoff sum
interval phi_eps(const shift_system& sys, const potential& phi, const point& x, int n,
                 const dyadic_scale& eps,
                 std::uint64_t budget = shift_system::default_budget);

// enclosure of Var(phi, 2^-m) = sup{|phi(x)-phi(y)| : d(x,y) < 2^-m}.
// m = 0 is the degenerate whole-space scale (global oscillation).
interval variation(const shift_system& sys, const potential& phi, const dyadic_scale& eps,
                   std::uint64_t budget = shift_system::default_budget);

// Var(phi, c * 2^-m) for integer c >= 1, reduced exactly to the dyadic grid
interval variation_at_multiple(const shift_system& sys, const potential& phi, int c, int m,
                               std::uint64_t budget = shift_system::default_budget);

// 2 * sum_{j>=0} Var(phi, eps * 2^-j): analytic distortion bound for the
// Bowen property at scale eps
interval bowen_series_bound(const shift_system& sys, const potential& phi,
                            const dyadic_scale& eps,
                            std::uint64_t budget = shift_system::default_budget);

} // namespace ergolab

#endif

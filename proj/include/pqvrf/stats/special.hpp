#pragma once

// Special functions used by the test statistics.

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace pqvrf::stats {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Upper regularized incomplete gamma Q(a, x).
inline double igamc(double a, double x) {
  if (!(a > 0)) throw NumericError("igamc: a must be positive");
  if (!(x >= 0)) throw NumericError("igamc: x must be non-negative");
  if (x == 0) return 1.0;
  if (std::isinf(x)) return 0.0;
  try {
    return boost::math::gamma_q(a, x);
  } catch (const std::exception& e) {
    throw NumericError(std::string("igamc: ") + e.what());
  }
}

inline double erfc(double x) { return std::erfc(x); }

// Standard normal cumulative distribution.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace pqvrf::stats

#ifndef TUBEBALL_TRIG_HPP
#define TUBEBALL_TRIG_HPP

#include <cmath>
#include <numbers>

namespace tubeball {

// sin(pi*x) and cos(pi*x) with exact argument reduction modulo 2.
//
// The folds below use only exact floating-point operations (fmod and
// differences of nearby values), so sinpi is exactly zero at integers and
// exactly +-1 at half-integers, and sinpi(-x) == -sinpi(x) bitwise. The
// sine-basis identities x(0) = x(omega/2) = 0 and the oddness of every
// trajectory then hold to the last bit instead of to ~|t|*eps.

inline double sinpi(double x) {
  double r = std::fmod(x, 2.0); // exact, in (-2, 2), sign of x
  if (r > 1.0) {
    r -= 2.0; // exact (Sterbenz)
  } else if (r < -1.0) {
    r += 2.0;
  }
  // r in [-1, 1]; sin(pi*(1 - r)) = sin(pi*r) folds into [-1/2, 1/2]
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  if (r == 0.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(std::numbers::pi * r);
}

inline double cospi(double x) {
  double r = std::fabs(std::fmod(x, 2.0)); // cos is even and 2-periodic
  if (r > 1.0) {
    r = 2.0 - r; // cos(2*pi - u) = cos(u), exact fold
  }
  // r in [0, 1]; cos(pi*(1 - r)) = -cos(pi*r)
  double sign = 1.0;
  if (r > 0.5) {
    r = 1.0 - r;
    sign = -1.0;
  }
  if (r == 0.5) return 0.0;
  if (r == 0.0) return sign;
  return sign * std::cos(std::numbers::pi * r);
}

} // namespace tubeball

#endif // TUBEBALL_TRIG_HPP

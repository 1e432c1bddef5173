#ifndef TUBEBALL_TRAJECTORY_HPP
#define TUBEBALL_TRAJECTORY_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "tubeball/model.hpp"

namespace tubeball {

/// Truncated symmetry-adapted Fourier trajectory
///
///   x(t)   = sum_j a_j sin(2 pi j t / omega)
///   phi(t) = (2 pi k / omega) t + sum_j b_j sin(2 pi j t / omega)
///
/// The pure sine basis plus the linear winding term make the orbit symmetries
/// identities of the representation: x and phi are odd in t, x is
/// omega-periodic, and phi gains exactly 2 pi k per period, for every
/// coefficient vector.
struct FourierTrajectory {
  double omega = 2.0 * 3.141592653589793;
  int k = 1;
  Eigen::VectorXd a; ///< sine coefficients of x
  Eigen::VectorXd b; ///< sine coefficients of the periodic part of phi

  int modes() const { return static_cast<int>(a.size()); }
};

/// Throws std::invalid_argument unless omega > 0, k >= 1, the coefficient
/// vectors are nonempty, of equal length and finite.
void check_valid(const FourierTrajectory &tr);

struct Jet {
  State state;
  Accel accel;
};

/// Analytic evaluation of the represented series and its first two
/// derivatives at arbitrary t.
Jet eval(const FourierTrajectory &tr, double t);

/// Uniform grid over one period, open at the right endpoint: t_i = i*omega/M,
/// i = 0..M-1. Entry i equals eval(tr, (i * omega) / M) bitwise.
struct SampledTrajectory {
  double omega = 0.0;
  int k = 1;
  std::vector<double> times;
  std::vector<State> states;
  std::vector<Accel> accels;
};

/// Requires M >= 2.
SampledTrajectory sample(const FourierTrajectory &tr, int M);

struct SobolevNorms {
  double xdot = 0.0;   ///< ||xdot||_{L2(0,omega)}
  double phidot = 0.0; ///< ||phidot||_{L2(0,omega)}
};

/// Exact Parseval values: ||xdot||^2 = (omega/2) sum a_j^2 (2 pi j/omega)^2,
/// ||phidot||^2 = omega (2 pi k/omega)^2 + (omega/2) sum b_j^2 (2 pi j/omega)^2.
SobolevNorms sobolev_norms(const FourierTrajectory &tr);

/// Deterministic generator for property tests and multistart initial points.
/// Coefficients are i.i.d. uniform in [-scale/j, scale/j]; the 1/j decay keeps
/// the samples smooth. Draw order: a_1..a_N, then b_1..b_N.
FourierTrajectory random_trajectory(double omega, int k, int N, double scale,
                                    std::uint64_t seed);

} // namespace tubeball

#endif // TUBEBALL_TRAJECTORY_HPP

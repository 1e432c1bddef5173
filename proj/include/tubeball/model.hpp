#ifndef TUBEBALL_MODEL_HPP
#define TUBEBALL_MODEL_HPP

#include <cmath>
#include <stdexcept>

namespace tubeball {

/// Physical constants of the tube-and-ball system. The defaults (m = J = g = 1)
/// are the normalization used throughout the test suite.
struct ModelParams {
  double m = 1.0; ///< mass of the ball
  double J = 1.0; ///< moment of inertia of the tube about its pivot
  double g = 1.0; ///< gravity

  bool valid() const {
    return m > 0.0 && J > 0.0 && g > 0.0 && std::isfinite(m) &&
           std::isfinite(J) && std::isfinite(g);
  }
};

inline void check_params(const ModelParams &p) {
  if (!p.valid()) {
    throw std::invalid_argument("ModelParams: m, J, g must be positive finite");
  }
}

/// Instantaneous configuration and velocity. The angle phi is the unwrapped
/// lift (never reduced mod 2*pi); x may pass through zero.
struct State {
  double x = 0.0;
  double phi = 0.0;
  double xdot = 0.0;
  double phidot = 0.0;
};

struct Accel {
  double xddot = 0.0;
  double phiddot = 0.0;
};

/// L = 1/2 (m x^2 + J) phidot^2 + 1/2 m xdot^2 - m g x sin(phi)
inline double lagrangian(const ModelParams &p, const State &s) {
  const double kin = 0.5 * (p.m * s.x * s.x + p.J) * s.phidot * s.phidot +
                     0.5 * p.m * s.xdot * s.xdot;
  return kin - p.m * p.g * s.x * std::sin(s.phi);
}

/// Total mechanical energy T + V; conserved along solutions.
inline double energy(const ModelParams &p, const State &s) {
  const double kin = 0.5 * (p.m * s.x * s.x + p.J) * s.phidot * s.phidot +
                     0.5 * p.m * s.xdot * s.xdot;
  return kin + p.m * p.g * s.x * std::sin(s.phi);
}

inline double dl_dx(const ModelParams &p, const State &s) {
  return p.m * s.x * s.phidot * s.phidot - p.m * p.g * std::sin(s.phi);
}

inline double dl_dphi(const ModelParams &p, const State &s) {
  return -p.m * p.g * s.x * std::cos(s.phi);
}

/// Strong Euler-Lagrange vector field. m x^2 + J > 0 always, so the angular
/// equation is never singular.
inline Accel el_rhs(const ModelParams &p, const State &s) {
  Accel a;
  a.xddot = s.x * s.phidot * s.phidot - p.g * std::sin(s.phi);
  a.phiddot = (-2.0 * p.m * s.x * s.xdot * s.phidot -
               p.m * p.g * s.x * std::cos(s.phi)) /
              (p.m * s.x * s.x + p.J);
  return a;
}

struct ElResidual {
  double r_x = 0.0;
  double r_phi = 0.0;
};

/// Residual form of the Lagrange equations: both components vanish iff
/// (s, a) satisfies them.
inline ElResidual el_residual(const ModelParams &p, const State &s,
                              const Accel &a) {
  ElResidual r;
  r.r_x = p.m * a.xddot - dl_dx(p, s);
  r.r_phi = (p.m * s.x * s.x + p.J) * a.phiddot +
            2.0 * p.m * s.x * s.xdot * s.phidot - dl_dphi(p, s);
  return r;
}

} // namespace tubeball

#endif // TUBEBALL_MODEL_HPP

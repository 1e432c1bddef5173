#include "tubeball/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tubeball/action.hpp"

namespace tubeball {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Vec4 = Eigen::Vector4d; // (x, phi, xdot, phidot)

Vec4 rhs(const ModelParams &p, const Vec4 &y) {
  State s{y[0], y[1], y[2], y[3]};
  const Accel a = el_rhs(p, s);
  return Vec4(y[2], y[3], a.xddot, a.phiddot);
}
} // namespace

IntegrationError::IntegrationError(int step)
    : std::runtime_error("integration produced a non-finite state at step " +
                         std::to_string(step)),
      step_(step) {}

IntegratedPath integrate_el(const ModelParams &p, const State &s0, double t_end,
                            int steps) {
  check_params(p);
  if (steps < 16) {
    throw std::invalid_argument("integrate_el: need at least 16 steps");
  }
  const double h = t_end / steps;
  IntegratedPath path;
  path.h = h;
  path.states.reserve(steps + 1);
  Vec4 y(s0.x, s0.phi, s0.xdot, s0.phidot);
  path.states.push_back(s0);
  for (int i = 0; i < steps; ++i) {
    const Vec4 k1 = rhs(p, y);
    const Vec4 k2 = rhs(p, y + 0.5 * h * k1);
    const Vec4 k3 = rhs(p, y + 0.5 * h * k2);
    const Vec4 k4 = rhs(p, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite()) {
      throw IntegrationError(i + 1);
    }
    path.states.push_back(State{y[0], y[1], y[2], y[3]});
  }
  return path;
}

ShootingResult shooting_check(const ModelParams &p, const FourierTrajectory &tr,
                              int steps) {
  check_valid(tr);
  const State s0 = eval(tr, 0.0).state;
  const IntegratedPath path = integrate_el(p, s0, tr.omega, steps);
  const State &se = path.states.back();

  ShootingResult res;
  res.mismatch = std::max({std::fabs(se.x - s0.x),
                           std::fabs(se.phi - s0.phi - kTwoPi * tr.k),
                           std::fabs(se.xdot - s0.xdot),
                           std::fabs(se.phidot - s0.phidot)});
  const double e0 = energy(p, s0);
  double drift = 0.0;
  for (const State &s : path.states) {
    drift = std::max(drift, std::fabs(energy(p, s) - e0));
  }
  res.energy_drift = drift / (1.0 + std::fabs(e0));
  return res;
}

double el_residual_profile(const ModelParams &p, const FourierTrajectory &tr,
                           int M) {
  const SampledTrajectory st = sample(tr, M);
  double sup = 0.0;
  for (int i = 0; i < M; ++i) {
    const ElResidual r = el_residual(p, st.states[i], st.accels[i]);
    sup = std::max({sup, std::fabs(r.r_x), std::fabs(r.r_phi)});
  }
  return sup;
}

LambdaProfile lambda_profile(const ModelParams &p, const FourierTrajectory &tr,
                             int M) {
  check_params(p);
  const SampledTrajectory st = sample(tr, M);
  const double h = tr.omega / M;

  // l on the closed grid; l(omega) evaluated directly (it equals l(0) by
  // periodicity of x and of cos phi)
  std::vector<double> l(M + 1);
  for (int i = 0; i < M; ++i) {
    l[i] = dl_dphi(p, st.states[i]);
  }
  l[M] = dl_dphi(p, eval(tr, tr.omega).state);

  // backward cumulative trapezoid: Q[i] = integral of l over [t_i, omega]
  std::vector<double> tail(M + 1);
  tail[M] = 0.0;
  for (int i = M - 1; i >= 0; --i) {
    tail[i] = tail[i + 1] + 0.5 * h * (l[i] + l[i + 1]);
  }

  LambdaProfile prof;
  prof.profile.resize(M);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (int i = 0; i < M; ++i) {
    const State &s = st.states[i];
    const double lam = (p.m * s.x * s.x + p.J) * s.phidot + tail[i];
    prof.profile[i] = lam;
    lo = std::min(lo, lam);
    hi = std::max(hi, lam);
    sum += lam;
  }
  prof.mean = sum / M;
  prof.spread = hi - lo;
  return prof;
}

PoincareCheck poincare_check(const Eigen::VectorXd &coeffs, double a) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("poincare_check: need a > 0");
  }
  const int n = static_cast<int>(coeffs.size());
  const int M = 8192; // Simpson panels (even)
  const double h = a / M;

  auto simpson_weight = [M](int r) {
    if (r == 0 || r == M) return 1.0;
    return (r % 2 == 1) ? 4.0 : 2.0;
  };

  double int_u2 = 0.0, int_ud2 = 0.0, max_abs_u = 0.0;
  for (int r = 0; r <= M; ++r) {
    const double t = r * h;
    double u = 0.0, ud = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double mu = (2.0 * j - 1.0) * std::numbers::pi / (2.0 * a);
      u += coeffs[j - 1] * std::sin(mu * t);
      ud += coeffs[j - 1] * mu * std::cos(mu * t);
    }
    const double w = simpson_weight(r);
    int_u2 += w * u * u;
    int_ud2 += w * ud * ud;
    max_abs_u = std::max(max_abs_u, std::fabs(u));
  }
  int_u2 *= h / 3.0;
  int_ud2 *= h / 3.0;

  PoincareCheck out;
  out.lhs_l2 = int_u2;
  out.rhs_l2 = 0.5 * a * a * int_ud2;
  out.lhs_c = max_abs_u * max_abs_u;
  out.rhs_c = a * int_ud2;
  return out;
}

VerifyReport verify_orbit(const ModelParams &p, const FourierTrajectory &tr,
                          int rk_steps, int M) {
  check_params(p);
  check_valid(tr);

  VerifyReport rep;
  rep.el_residual_max = el_residual_profile(p, tr, M);

  const ShootingResult shoot = shooting_check(p, tr, rk_steps);
  rep.shooting_mismatch = shoot.mismatch;
  rep.energy_drift = shoot.energy_drift;

  const LambdaProfile lam = lambda_profile(p, tr, M);
  rep.lambda_mean = lam.mean;
  rep.lambda_spread = lam.spread;
  rep.lambda_unit_form = (p.m == 1.0 && p.J == 1.0 && p.g == 1.0);

  rep.action = action(p, tr, M).value;
  rep.coercivity_margin = rep.action - coercivity_bound(tr);

  // symmetry identities probed off-grid across three periods
  double sym = 0.0;
  double max_x = 0.0;
  const int probes = 257;
  for (int i = 0; i < probes; ++i) {
    const double t = (i + 0.37) / probes * 3.0 * tr.omega - tr.omega;
    const State at = eval(tr, t).state;
    const State shifted = eval(tr, t + tr.omega).state;
    const State mirrored = eval(tr, -t).state;
    sym = std::max({sym, std::fabs(shifted.x - at.x),
                    std::fabs(shifted.phi - at.phi - kTwoPi * tr.k),
                    std::fabs(mirrored.x + at.x),
                    std::fabs(mirrored.phi + at.phi)});
    max_x = std::max(max_x, std::fabs(at.x));
  }
  rep.symmetry_err = sym;
  rep.max_abs_x = max_x;
  return rep;
}

} // namespace tubeball

#include "tubeball/action.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tubeball/trig.hpp"

namespace tubeball {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_quad(const FourierTrajectory &tr, int M) {
  check_valid(tr);
  if (M < min_quad_points(tr.modes())) {
    throw std::invalid_argument("quadrature size below the 4N+1 aliasing floor");
  }
}

// One pass over the grid. Trigonometric factors come from a size-M table:
// sin(2 pi j t_i / omega) = table[(i*j) mod M], so the sums involve one
// sinpi/cospi call per table slot and lookups afterwards.
ActionValue accumulate(const ModelParams &p, const FourierTrajectory &tr, int M,
                       ActionGradient *grad) {
  const int n = tr.modes();
  const double h = tr.omega / M;
  const double nu0 = kTwoPi / tr.omega;
  const double c0 = nu0 * tr.k;

  std::vector<double> sin_tab(M), cos_tab(M);
  for (int r = 0; r < M; ++r) {
    sin_tab[r] = sinpi(2.0 * r / M);
    cos_tab[r] = cospi(2.0 * r / M);
  }

  if (grad != nullptr) {
    grad->da = Eigen::VectorXd::Zero(n);
    grad->db = Eigen::VectorXd::Zero(n);
  }

  double value = 0.0;
  for (int i = 0; i < M; ++i) {
    double x = 0.0, xd = 0.0, psi = 0.0, psid = 0.0;
    for (int j = 1; j <= n; ++j) {
      const int r = static_cast<int>((static_cast<long long>(i) * j) % M);
      const double nu = nu0 * j;
      x += tr.a[j - 1] * sin_tab[r];
      xd += tr.a[j - 1] * nu * cos_tab[r];
      psi += tr.b[j - 1] * sin_tab[r];
      psid += tr.b[j - 1] * nu * cos_tab[r];
    }
    // winding angle reduced mod 2 pi before adding psi keeps sin/cos args small
    const int rk = static_cast<int>((static_cast<long long>(i) * tr.k) % M);
    const double phi = kTwoPi * rk / M + psi;
    const double phidot = c0 + psid;

    const double sin_phi = std::sin(phi);
    const double mx2J = p.m * x * x + p.J;
    value += 0.5 * mx2J * phidot * phidot + 0.5 * p.m * xd * xd -
             p.m * p.g * x * sin_phi;

    if (grad != nullptr) {
      const double dlx = p.m * x * phidot * phidot - p.m * p.g * sin_phi;
      const double dlphi = -p.m * p.g * x * std::cos(phi);
      const double px = p.m * xd;
      const double pphi = mx2J * phidot;
      for (int j = 1; j <= n; ++j) {
        const int r = static_cast<int>((static_cast<long long>(i) * j) % M);
        const double nu = nu0 * j;
        grad->da[j - 1] += dlx * sin_tab[r] + px * nu * cos_tab[r];
        grad->db[j - 1] += dlphi * sin_tab[r] + pphi * nu * cos_tab[r];
      }
    }
  }

  if (grad != nullptr) {
    grad->da *= h;
    grad->db *= h;
  }
  return ActionValue{value * h, M};
}
} // namespace

ActionValue action(const ModelParams &p, const FourierTrajectory &tr, int M) {
  check_params(p);
  check_quad(tr, M);
  return accumulate(p, tr, M, nullptr);
}

ActionGradient action_gradient(const ModelParams &p, const FourierTrajectory &tr,
                               int M) {
  check_params(p);
  check_quad(tr, M);
  ActionGradient grad;
  accumulate(p, tr, M, &grad);
  return grad;
}

ActionValue action_and_gradient(const ModelParams &p, const FourierTrajectory &tr,
                                int M, ActionGradient &grad) {
  check_params(p);
  check_quad(tr, M);
  return accumulate(p, tr, M, &grad);
}

double coercivity_bound(const FourierTrajectory &tr) {
  check_valid(tr);
  const SobolevNorms norms = sobolev_norms(tr);
  return 0.5 * norms.phidot * norms.phidot + 0.5 * norms.xdot * norms.xdot -
         std::pow(tr.omega, 1.5) / std::numbers::sqrt2 * norms.xdot;
}

} // namespace tubeball

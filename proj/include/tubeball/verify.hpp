#ifndef TUBEBALL_VERIFY_HPP
#define TUBEBALL_VERIFY_HPP

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "tubeball/model.hpp"
#include "tubeball/trajectory.hpp"

namespace tubeball {

/// Fixed-step classical Runge-Kutta path of the strong Lagrange equations.
/// states[i] is the state at t = i*h, h = t_end/steps (steps+1 entries).
struct IntegratedPath {
  double h = 0.0;
  std::vector<State> states;
};

class IntegrationError : public std::runtime_error {
public:
  explicit IntegrationError(int step);
  int step() const { return step_; }

private:
  int step_;
};

/// Classical 4th-order integration of (xdot, phidot, el_rhs). Deterministic;
/// requires steps >= 16; throws IntegrationError when the state leaves the
/// finite range.
IntegratedPath integrate_el(const ModelParams &p, const State &s0, double t_end,
                            int steps);

struct ShootingResult {
  double mismatch = 0.0;     ///< sup-norm closure gap at t = omega
  double energy_drift = 0.0; ///< max |E(t)-E(0)| / (1+|E(0)|) along the path
};

/// Integrates the strong equations from eval(tr, 0) over one period and
/// measures how well the path closes: max of |x(w)-x(0)|, |phi(w)-phi(0)-2 pi k|,
/// |xdot(w)-xdot(0)|, |phidot(w)-phidot(0)|.
ShootingResult shooting_check(const ModelParams &p, const FourierTrajectory &tr,
                              int steps);

/// Sup over the M-grid of |r_x|, |r_phi| from el_residual applied to the
/// trajectory's analytic jet.
double el_residual_profile(const ModelParams &p, const FourierTrajectory &tr,
                           int M);

struct LambdaProfile {
  double mean = 0.0;
  double spread = 0.0; ///< max - min over the grid
  std::vector<double> profile;
};

/// Conserved-multiplier profile lambda(t_i) = (m x^2 + J) phidot + Q_i, where
/// Q_i is the trapezoidal quadrature of dl_dphi over [t_i, omega]. Constant
/// (zero spread) exactly when the trajectory solves the angular Lagrange
/// equation weakly; for the trivial trajectory it is J*2*pi*k/omega on the
/// nose.
LambdaProfile lambda_profile(const ModelParams &p, const FourierTrajectory &tr,
                             int M);

struct PoincareCheck {
  double lhs_l2 = 0.0; ///< ||u||^2_{L2(0,a)}
  double rhs_l2 = 0.0; ///< (a^2/2) ||udot||^2_{L2(0,a)}
  double lhs_c = 0.0;  ///< ||u||^2_{C[0,a]}
  double rhs_c = 0.0;  ///< a ||udot||^2_{L2(0,a)}
};

/// Both sides of the odd-function Poincare inequalities, evaluated by
/// dense-grid Simpson quadrature and grid maximization. The function is
/// u(t) = sum_j coeffs_j sin((2j-1) pi t / (2a)): the odd quarter-wave sine
/// family, whose truncations converge in H^1 even for profiles like u(t) = t
/// that do not vanish at t = a.
PoincareCheck poincare_check(const Eigen::VectorXd &coeffs, double a);

/// Independent measurements for a candidate orbit; consumes only the
/// coefficient vector, so stored orbits are re-verifiable in isolation.
struct VerifyReport {
  double el_residual_max = 0.0;
  double shooting_mismatch = 0.0;
  double energy_drift = 0.0;
  double lambda_mean = 0.0;
  double lambda_spread = 0.0;
  double action = 0.0;
  double coercivity_margin = 0.0; ///< action - coercivity bound (unit-params form)
  double symmetry_err = 0.0;
  double max_abs_x = 0.0; ///< how long the tube must be
  bool lambda_unit_form = true; ///< whether (m,J,g) = (1,1,1) verbatim identity applied
};

/// Runs all checks. quad M is used for the residual, lambda and action
/// grids; rk_steps for the shooting integration.
VerifyReport verify_orbit(const ModelParams &p, const FourierTrajectory &tr,
                          int rk_steps, int M);

} // namespace tubeball

#endif // TUBEBALL_VERIFY_HPP

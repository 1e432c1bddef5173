#ifndef TUBEBALL_ACTION_HPP
#define TUBEBALL_ACTION_HPP

#include <Eigen/Core>

#include "tubeball/model.hpp"
#include "tubeball/trajectory.hpp"

namespace tubeball {

struct ActionValue {
  double value = 0.0;
  int quad_points = 0; ///< M used, recorded for reproducibility
};

struct ActionGradient {
  Eigen::VectorXd da; ///< dS/da_j
  Eigen::VectorXd db; ///< dS/db_j
};

/// Smallest admissible quadrature size for a trajectory with N modes. The
/// integrand contains products of degree up to 4N (x^2 phidot^2); M >= 4N+1
/// keeps those free of aliasing.
inline int min_quad_points(int modes) { return 4 * modes + 1; }

/// Action S = integral of L over one period, by the trapezoidal rule on the
/// uniform M-grid. The integrand is omega-periodic, so the rule reduces to
/// the plain average and is spectrally accurate. Terms are accumulated in
/// ascending grid order; results are bitwise reproducible.
/// Throws std::invalid_argument if M < min_quad_points(tr.modes()).
ActionValue action(const ModelParams &p, const FourierTrajectory &tr, int M);

/// Exact coefficient gradient of the same quadrature sum:
///   dS/da_j = int [ dl_dx sin(nu_j t) + m xdot nu_j cos(nu_j t) ] dt
///   dS/db_j = int [ dl_dphi sin(nu_j t) + (m x^2 + J) phidot nu_j cos(nu_j t) ] dt
/// with nu_j = 2 pi j / omega. Component j is the weak-form pairing of the
/// Lagrange equations with the j-th sine test function, so a zero gradient is
/// the discrete weak-solution condition.
ActionGradient action_gradient(const ModelParams &p, const FourierTrajectory &tr,
                               int M);

/// Both at once (one pass over the grid); the optimizer's inner loop.
ActionValue action_and_gradient(const ModelParams &p, const FourierTrajectory &tr,
                                int M, ActionGradient &grad);

/// Lower bound  1/2 ||phidot||^2 + 1/2 ||xdot||^2 - (omega^{3/2}/sqrt 2) ||xdot||
/// on the action at unit ModelParams, from exact Parseval norms. Equality is
/// attained by the trivial winding trajectory (a = b = 0).
double coercivity_bound(const FourierTrajectory &tr);

} // namespace tubeball

#endif // TUBEBALL_ACTION_HPP

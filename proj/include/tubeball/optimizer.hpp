#ifndef TUBEBALL_OPTIMIZER_HPP
#define TUBEBALL_OPTIMIZER_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tubeball/action.hpp"
#include "tubeball/model.hpp"
#include "tubeball/trajectory.hpp"

namespace tubeball {

struct OptimConfig {
  int modes = 32;       ///< N, truncation order
  int quad = 0;         ///< quadrature size M; 0 means 8*modes
  double gtol = 1e-10;  ///< termination: sup-norm of the coefficient gradient
  int max_iters = 5000;
  int memory = 10;      ///< quasi-Newton history length
  double ls_shrink = 0.5;
  double ls_c1 = 1e-4;  ///< Armijo sufficient-decrease constant
  int starts = 1;
  std::uint64_t seed = 0;
  double init_scale = 0.1;

  /// Optional explicit seed schedule for multistart. When nonempty it
  /// overrides `starts` and every start (including index 0) is drawn from
  /// random_trajectory with the listed seed; duplicate seeds give identical
  /// runs that the report dedup collapses. When empty, start 0 is the zero
  /// trajectory and start s >= 1 uses seed + s.
  std::vector<std::uint64_t> start_seeds;

  int quad_points() const { return quad > 0 ? quad : 8 * modes; }
};

void check_config(const OptimConfig &cfg);

struct OptimReport {
  FourierTrajectory trajectory;
  double action = 0.0;
  double grad_norm = 0.0; ///< sup-norm at the final iterate
  int iterations = 0;
  bool converged = false;
  int start_index = 0;
  std::vector<double> action_history; ///< accepted values, non-increasing
};

/// Action or gradient became non-finite at an accepted iterate.
class NonFiniteError : public std::runtime_error {
public:
  NonFiniteError(FourierTrajectory iterate, int iteration);
  const FourierTrajectory &iterate() const { return iterate_; }
  int iteration() const { return iteration_; }

private:
  FourierTrajectory iterate_;
  int iteration_;
};

/// Every start of find_orbit hit max_iters.
class NoConvergenceError : public std::runtime_error {
public:
  explicit NoConvergenceError(double best_grad_norm);
  double best_grad_norm() const { return best_grad_norm_; }

private:
  double best_grad_norm_;
};

/// Limited-memory BFGS descent on the action over the coefficient space,
/// with backtracking Armijo line search and steepest-descent fallback when
/// the quasi-Newton direction fails. Accepted action values never increase
/// while decreases are resolvable in double precision; once the predicted
/// decrease drops below ~4 eps |f| the search accepts on gradient
/// contraction instead (values may then wiggle by a few ulp), which is what
/// lets runs certify sup-norm gradients of 1e-10 and below. Deterministic;
/// single-threaded.
OptimReport minimize(const ModelParams &p, const FourierTrajectory &init,
                     const OptimConfig &cfg);

/// Runs minimize from the configured starts and returns the best converged
/// report (lowest action, ties to the lowest start index). Throws
/// NoConvergenceError if no start converges.
OptimReport find_orbit(const ModelParams &p, double omega, int k,
                       const OptimConfig &cfg);

/// All per-start reports, deduplicated by coefficient sup-distance <= 1e-6
/// and ordered by action ascending then start index. Per-start failures are
/// recorded in place (converged = false; a non-finite blowup is recorded
/// with infinite action), never thrown.
std::vector<OptimReport> multistart(const ModelParams &p, double omega, int k,
                                    const OptimConfig &cfg);

} // namespace tubeball

#endif // TUBEBALL_OPTIMIZER_HPP

#include "tubeball/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace tubeball {

namespace {

struct Pair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd pack(const FourierTrajectory &tr) {
  const int n = tr.modes();
  Eigen::VectorXd theta(2 * n);
  theta.head(n) = tr.a;
  theta.tail(n) = tr.b;
  return theta;
}

FourierTrajectory unpack(const FourierTrajectory &like,
                         const Eigen::VectorXd &theta) {
  const int n = like.modes();
  FourierTrajectory tr = like;
  tr.a = theta.head(n);
  tr.b = theta.tail(n);
  return tr;
}

// two-loop recursion for the L-BFGS direction -H*g
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd &g,
                                const std::deque<Pair> &hist) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(hist.size());
  for (int i = static_cast<int>(hist.size()) - 1; i >= 0; --i) {
    alpha[i] = hist[i].rho * hist[i].s.dot(q);
    q -= alpha[i] * hist[i].y;
  }
  if (!hist.empty()) {
    const Pair &last = hist.back();
    q *= last.s.dot(last.y) / last.y.dot(last.y);
  }
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const double beta = hist[i].rho * hist[i].y.dot(q);
    q += (alpha[i] - beta) * hist[i].s;
  }
  return -q;
}

FourierTrajectory make_start(double omega, int k, const OptimConfig &cfg,
                             int start_index) {
  if (!cfg.start_seeds.empty()) {
    return random_trajectory(omega, k, cfg.modes, cfg.init_scale,
                             cfg.start_seeds[start_index]);
  }
  if (start_index == 0) {
    FourierTrajectory tr;
    tr.omega = omega;
    tr.k = k;
    tr.a = Eigen::VectorXd::Zero(cfg.modes);
    tr.b = Eigen::VectorXd::Zero(cfg.modes);
    return tr;
  }
  return random_trajectory(omega, k, cfg.modes, cfg.init_scale,
                           cfg.seed + static_cast<std::uint64_t>(start_index));
}

int num_starts(const OptimConfig &cfg) {
  return cfg.start_seeds.empty() ? cfg.starts
                                 : static_cast<int>(cfg.start_seeds.size());
}

bool same_orbit(const OptimReport &lhs, const OptimReport &rhs) {
  const double da =
      (lhs.trajectory.a - rhs.trajectory.a).lpNorm<Eigen::Infinity>();
  const double db =
      (lhs.trajectory.b - rhs.trajectory.b).lpNorm<Eigen::Infinity>();
  return std::max(da, db) <= 1e-6;
}

} // namespace

NonFiniteError::NonFiniteError(FourierTrajectory iterate, int iteration)
    : std::runtime_error("non-finite action or gradient at iteration " +
                         std::to_string(iteration)),
      iterate_(std::move(iterate)), iteration_(iteration) {}

NoConvergenceError::NoConvergenceError(double best_grad_norm)
    : std::runtime_error("no start converged; best gradient sup-norm " +
                         std::to_string(best_grad_norm)),
      best_grad_norm_(best_grad_norm) {}

void check_config(const OptimConfig &cfg) {
  const bool ok = cfg.modes >= 1 &&
                  (cfg.quad == 0 || cfg.quad >= min_quad_points(cfg.modes)) &&
                  cfg.gtol > 0.0 && cfg.max_iters >= 0 && cfg.memory >= 1 &&
                  cfg.ls_shrink > 0.0 && cfg.ls_shrink < 1.0 &&
                  cfg.ls_c1 > 0.0 && cfg.ls_c1 < 1.0 && cfg.starts >= 1 &&
                  cfg.init_scale >= 0.0;
  if (!ok) {
    throw std::invalid_argument("OptimConfig: parameter out of range");
  }
}

OptimReport minimize(const ModelParams &p, const FourierTrajectory &init,
                     const OptimConfig &cfg) {
  check_params(p);
  check_config(cfg);
  check_valid(init);
  if (init.modes() != cfg.modes) {
    throw std::invalid_argument("minimize: init has " +
                                std::to_string(init.modes()) +
                                " modes, config expects " +
                                std::to_string(cfg.modes));
  }
  const int M = cfg.quad_points();
  constexpr int kMaxBacktracks = 60;

  Eigen::VectorXd theta = pack(init);
  ActionGradient grad;
  double f = action_and_gradient(p, init, M, grad).value;
  Eigen::VectorXd g(2 * cfg.modes);
  g.head(cfg.modes) = grad.da;
  g.tail(cfg.modes) = grad.db;
  if (!std::isfinite(f) || !g.allFinite()) {
    throw NonFiniteError(init, 0);
  }

  OptimReport report;
  report.trajectory = init;
  report.action = f;
  report.grad_norm = g.lpNorm<Eigen::Infinity>();
  report.action_history.push_back(f);
  if (report.grad_norm <= cfg.gtol) {
    report.converged = true;
    return report;
  }

  std::deque<Pair> hist;
  bool first_step = true;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    Eigen::VectorXd d = lbfgs_direction(g, hist);
    double gd = g.dot(d);
    if (!(gd < 0.0) || !d.allFinite()) {
      d = -g; // quasi-Newton direction unusable, fall back
      gd = g.dot(d);
      hist.clear();
    }

    double alpha = first_step ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    const double f_resolution =
        4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(f));
    const bool at_value_floor =
        std::fabs(cfg.ls_c1 * alpha * gd) <= f_resolution;

    bool accepted = false;
    Eigen::VectorXd theta_new, g_new;
    double f_new = 0.0;
    bool have_g_new = false;

    if (at_value_floor) {
      // The sufficient-decrease test is below the resolution of the action
      // value. Accept on gradient contraction instead: the gradient is still
      // accurate to ~1e-15 absolute, far below gtol.
      const double g_inf = g.lpNorm<Eigen::Infinity>();
      for (int attempt = 0; attempt < 8; ++attempt) {
        theta_new = theta + alpha * d;
        FourierTrajectory tr_try = unpack(init, theta_new);
        ActionGradient grad_try;
        const double f_try = action_and_gradient(p, tr_try, M, grad_try).value;
        Eigen::VectorXd g_try(2 * cfg.modes);
        g_try.head(cfg.modes) = grad_try.da;
        g_try.tail(cfg.modes) = grad_try.db;
        if (std::isfinite(f_try) && g_try.allFinite() &&
            f_try <= f + f_resolution &&
            g_try.lpNorm<Eigen::Infinity>() <= 0.9 * g_inf) {
          f_new = f_try;
          g_new = g_try;
          have_g_new = true;
          accepted = true;
          break;
        }
        alpha *= cfg.ls_shrink;
      }
    } else {
      for (int attempt = 0; attempt < kMaxBacktracks; ++attempt) {
        theta_new = theta + alpha * d;
        const double f_try = action(p, unpack(init, theta_new), M).value;
        if (std::isfinite(f_try) && f_try <= f + cfg.ls_c1 * alpha * gd) {
          f_new = f_try;
          accepted = true;
          break;
        }
        alpha *= cfg.ls_shrink;
      }
      if (!accepted && hist.size() > 0) {
        // retry once along -g before giving up
        hist.clear();
        d = -g;
        gd = g.dot(d);
        alpha = std::min(1.0, 1.0 / g.norm());
        for (int attempt = 0; attempt < kMaxBacktracks; ++attempt) {
          theta_new = theta + alpha * d;
          const double f_try = action(p, unpack(init, theta_new), M).value;
          if (std::isfinite(f_try) && f_try <= f + cfg.ls_c1 * alpha * gd) {
            f_new = f_try;
            accepted = true;
            break;
          }
          alpha *= cfg.ls_shrink;
        }
      }
    }
    if (!accepted || theta_new == theta) {
      // stuck at the floating-point floor of the line search
      break;
    }
    first_step = false;

    FourierTrajectory tr_new = unpack(init, theta_new);
    if (!have_g_new) {
      ActionGradient grad_new;
      action_and_gradient(p, tr_new, M, grad_new);
      g_new.resize(2 * cfg.modes);
      g_new.head(cfg.modes) = grad_new.da;
      g_new.tail(cfg.modes) = grad_new.db;
    }
    if (!g_new.allFinite()) {
      throw NonFiniteError(tr_new, iter);
    }

    const Eigen::VectorXd s = theta_new - theta;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      hist.push_back(Pair{s, y, 1.0 / sy});
      if (static_cast<int>(hist.size()) > cfg.memory) {
        hist.pop_front();
      }
    }

    theta = theta_new;
    f = f_new;
    g = g_new;
    report.trajectory = tr_new;
    report.action = f;
    report.grad_norm = g.lpNorm<Eigen::Infinity>();
    report.iterations = iter;
    report.action_history.push_back(f);
    if (report.grad_norm <= cfg.gtol) {
      report.converged = true;
      break;
    }
  }
  return report;
}

OptimReport find_orbit(const ModelParams &p, double omega, int k,
                       const OptimConfig &cfg) {
  check_params(p);
  check_config(cfg);
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("find_orbit: omega must be positive");
  }
  if (k < 1) {
    throw std::invalid_argument("find_orbit: winding number k must be >= 1");
  }

  const OptimReport *best = nullptr;
  std::vector<OptimReport> reports;
  reports.reserve(num_starts(cfg));
  for (int s = 0; s < num_starts(cfg); ++s) {
    OptimReport rep = minimize(p, make_start(omega, k, cfg, s), cfg);
    rep.start_index = s;
    reports.push_back(std::move(rep));
  }
  for (const OptimReport &rep : reports) {
    if (!rep.converged) continue;
    if (best == nullptr || rep.action < best->action) {
      best = &rep;
    }
  }
  if (best == nullptr) {
    double best_grad = std::numeric_limits<double>::infinity();
    for (const OptimReport &rep : reports) {
      best_grad = std::min(best_grad, rep.grad_norm);
    }
    throw NoConvergenceError(best_grad);
  }
  return *best;
}

std::vector<OptimReport> multistart(const ModelParams &p, double omega, int k,
                                    const OptimConfig &cfg) {
  check_params(p);
  check_config(cfg);
  if (!(omega > 0.0) || k < 1) {
    throw std::invalid_argument("multistart: bad omega or k");
  }

  std::vector<OptimReport> reports;
  for (int s = 0; s < num_starts(cfg); ++s) {
    const FourierTrajectory start = make_start(omega, k, cfg, s);
    try {
      OptimReport rep = minimize(p, start, cfg);
      rep.start_index = s;
      reports.push_back(std::move(rep));
    } catch (const NonFiniteError &err) {
      OptimReport failed;
      failed.trajectory = err.iterate();
      failed.action = std::numeric_limits<double>::infinity();
      failed.grad_norm = std::numeric_limits<double>::infinity();
      failed.iterations = err.iteration();
      failed.converged = false;
      failed.start_index = s;
      reports.push_back(std::move(failed));
    }
  }

  std::sort(reports.begin(), reports.end(),
            [](const OptimReport &lhs, const OptimReport &rhs) {
              if (lhs.action != rhs.action) return lhs.action < rhs.action;
              return lhs.start_index < rhs.start_index;
            });
  std::vector<OptimReport> unique;
  for (OptimReport &rep : reports) {
    bool dup = false;
    for (const OptimReport &kept : unique) {
      if (same_orbit(rep, kept)) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(std::move(rep));
  }
  return unique;
}

} // namespace tubeball

// Acceptance suite: runs every contract criterion end to end and prints one
// pass/fail line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "tubeball/action.hpp"
#include "tubeball/model.hpp"
#include "tubeball/optimizer.hpp"
#include "tubeball/orbit_io.hpp"
#include "tubeball/trajectory.hpp"
#include "tubeball/verify.hpp"

using namespace tubeball;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const char *id, bool pass, const std::string &detail) {
  std::printf("%-4s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double uniform(std::mt19937_64 &eng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
}

int uniform_int(std::mt19937_64 &eng, int lo, int hi) {
  return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
}

FourierTrajectory trivial(double omega, int k, int n) {
  FourierTrajectory tr;
  tr.omega = omega;
  tr.k = k;
  tr.a = Eigen::VectorXd::Zero(n);
  tr.b = Eigen::VectorXd::Zero(n);
  return tr;
}

double grad_sup(const ActionGradient &g) {
  return std::max(g.da.lpNorm<Eigen::Infinity>(),
                  g.db.lpNorm<Eigen::Infinity>());
}

// ---- A1: symmetry identities of the trajectory representation ----
void a1() {
  std::mt19937_64 eng(101);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double omega = uniform(eng, 1.0, 10.0);
    const int k = uniform_int(eng, 1, 5);
    const int n = uniform_int(eng, 1, 64);
    const FourierTrajectory tr = random_trajectory(omega, k, n, 1.0, eng());
    const double t = uniform(eng, -3.0, 3.0) * omega;

    const State at = eval(tr, t).state;
    const State shifted = eval(tr, t + omega).state;
    const State mirrored = eval(tr, -t).state;
    worst = std::max({worst, std::fabs(shifted.x - at.x),
                      std::fabs(shifted.phi - at.phi - 2.0 * pi * k),
                      std::fabs(mirrored.x + at.x),
                      std::fabs(mirrored.phi + at.phi)});
  }
  report("A1", worst <= 1e-10,
         "symmetry/periodicity/winding residuals: max " + fmt(worst) +
             " (limit 1e-10)");
}

// ---- A2: analytic gradient vs central finite differences ----
void a2() {
  const ModelParams p;
  std::mt19937_64 eng(102);
  double worst_rel = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double omega = uniform(eng, 2.0, 8.0);
    const int k = uniform_int(eng, 1, 3);
    const int n = uniform_int(eng, 2, 32);
    FourierTrajectory tr = random_trajectory(omega, k, n, 0.6, eng());
    const int M = 8 * n + 8;
    const ActionGradient g = action_gradient(p, tr, M);
    const double scale = 1.0 + grad_sup(g);
    const double h = 1e-6;
    for (int j = 0; j < n; ++j) {
      for (int which = 0; which < 2; ++which) {
        double &slot = which == 0 ? tr.a[j] : tr.b[j];
        const double saved = slot;
        slot = saved + h;
        const double fp = action(p, tr, M).value;
        slot = saved - h;
        const double fm = action(p, tr, M).value;
        slot = saved;
        const double fd = (fp - fm) / (2.0 * h);
        const double an = which == 0 ? g.da[j] : g.db[j];
        worst_rel = std::max(worst_rel, std::fabs(fd - an) / scale);
      }
    }
  }
  report("A2", worst_rel < 1e-6,
         "gradient vs finite differences: max rel err " + fmt(worst_rel) +
             " (limit 1e-6)");
}

// ---- A3..A6 share the four reference solves ----
struct Solved {
  double omega;
  int k;
  OptimReport rep;
};

std::vector<Solved> solve_reference_orbits() {
  const ModelParams p;
  OptimConfig cfg; // defaults: N=32, M=256, gtol 1e-10, 5000 iterations
  std::vector<Solved> out;
  for (const auto &[omega, k] :
       {std::pair{2.0 * pi, 1}, {2.0 * pi, 2}, {5.0, 1}, {5.0, 3}}) {
    Solved s{omega, k, find_orbit(p, omega, k, cfg)};
    out.push_back(std::move(s));
  }
  return out;
}

void a3(const std::vector<Solved> &orbits) {
  const ModelParams p;
  bool pass = true;
  double worst_mismatch = 0.0;
  int worst_iters = 0;
  for (const Solved &s : orbits) {
    pass = pass && s.rep.converged && s.rep.grad_norm <= 1e-10 &&
           s.rep.iterations <= 5000;
    const ShootingResult shoot = shooting_check(p, s.rep.trajectory, 16384);
    worst_mismatch = std::max(worst_mismatch, shoot.mismatch);
    worst_iters = std::max(worst_iters, s.rep.iterations);
    pass = pass && shoot.mismatch < 1e-3;
  }
  report("A3", pass,
         "four (omega,k) solves converged, worst shooting mismatch " +
             fmt(worst_mismatch) + " (limit 1e-3), worst iterations " +
             std::to_string(worst_iters));
}

void a4(const std::vector<Solved> &orbits) {
  const ModelParams p;
  bool pass = true;
  double worst_drift = 0.0;
  for (const Solved &s : orbits) {
    const double drift = shooting_check(p, s.rep.trajectory, 16384).energy_drift;
    worst_drift = std::max(worst_drift, drift);
    pass = pass && drift < 1e-6;
  }
  const double d1 =
      shooting_check(p, orbits[0].rep.trajectory, 1024).energy_drift;
  const double d2 =
      shooting_check(p, orbits[0].rep.trajectory, 2048).energy_drift;
  const double ratio = d1 / d2;
  pass = pass && ratio >= 8.0;
  report("A4", pass,
         "energy drift: worst " + fmt(worst_drift) +
             " (limit 1e-6), halving-step reduction " + fmt(ratio) + "x (need >= 8x)");
}

void a5(const std::vector<Solved> &orbits) {
  const ModelParams p;
  bool pass = true;
  double worst = 0.0;
  for (const Solved &s : orbits) {
    const LambdaProfile prof = lambda_profile(p, s.rep.trajectory, 2048);
    const double rel = prof.spread / std::fabs(prof.mean);
    worst = std::max(worst, rel);
    pass = pass && rel < 1e-4;
  }
  const LambdaProfile triv = lambda_profile(p, trivial(2.0 * pi, 2, 32), 2048);
  const bool triv_exact =
      triv.spread == 0.0 &&
      std::fabs(triv.mean - 2.0) <= 1e-15; // 2 pi k / omega with k=2, omega=2 pi
  report("A5", pass && triv_exact,
         "lambda constancy: worst spread/|mean| " + fmt(worst) +
             " (limit 1e-4); trivial profile exact: " +
             (triv_exact ? "yes" : "NO"));
}

void a6(const std::vector<Solved> &orbits) {
  const ModelParams p;
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const Solved &s : orbits) {
    const double trivial_action = 2.0 * pi * pi * s.k * s.k / s.omega;
    worst_margin = std::min(worst_margin, trivial_action - s.rep.action);
    pass = pass && s.rep.action < trivial_action;
  }
  double worst_rel = 0.0;
  for (const Solved &s : orbits) {
    const int n = 32;
    const ActionGradient g =
        action_gradient(p, trivial(s.omega, s.k, n), 8 * n);
    const double expected = -s.omega / 2.0;
    worst_rel = std::max(
        worst_rel, std::fabs(g.da[s.k - 1] - expected) / std::fabs(expected));
  }
  pass = pass && worst_rel < 1e-8;
  report("A6", pass,
         "action beats trivial by >= " + fmt(worst_margin) +
             "; start gradient -omega/2 rel err " + fmt(worst_rel) +
             " (limit 1e-8)");
}

// ---- A7: coercivity inequality on random trajectories ----
void a7() {
  const ModelParams p;
  std::mt19937_64 eng(107);
  bool pass = true;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    const double omega = uniform(eng, 1.0, 10.0);
    const int k = uniform_int(eng, 1, 5);
    const int n = uniform_int(eng, 1, 64);
    const FourierTrajectory tr = random_trajectory(omega, k, n, 1.0, eng());
    const double a = action(p, tr, 8 * n + 2).value;
    const double slack = a - coercivity_bound(tr) + 1e-9 * (1.0 + std::fabs(a));
    worst = std::min(worst, slack);
    pass = pass && slack >= 0.0;
  }
  report("A7", pass,
         "coercivity bound held on 1000 samples; smallest slack " + fmt(worst));
}

// ---- A8: Poincare inequalities ----
void a8() {
  std::mt19937_64 eng(108);
  bool pass = true;
  for (int i = 0; i < 1000; ++i) {
    const double a = uniform(eng, 0.1, 10.0);
    const int n = uniform_int(eng, 1, 24);
    Eigen::VectorXd c(n);
    for (int j = 1; j <= n; ++j) {
      c[j - 1] = uniform(eng, -1.0, 1.0) / j;
    }
    const PoincareCheck pc = poincare_check(c, a);
    pass = pass && pc.lhs_l2 <= pc.rhs_l2 + 1e-9 && pc.lhs_c <= pc.rhs_c + 1e-9;
  }

  // u(t) = t reproduces a^3/3 vs a^3/2
  const double a = 2.0;
  const int n = 400;
  Eigen::VectorXd c(n);
  for (int j = 1; j <= n; ++j) {
    const double mu = (2.0 * j - 1.0) * pi / (2.0 * a);
    c[j - 1] = (j % 2 == 1 ? 2.0 : -2.0) / (a * mu * mu);
  }
  const PoincareCheck pc = poincare_check(c, a);
  const bool closed_forms =
      std::fabs(pc.lhs_l2 - a * a * a / 3.0) <= 2e-3 * (a * a * a / 3.0) &&
      std::fabs(pc.rhs_l2 - a * a * a / 2.0) <= 2e-3 * (a * a * a / 2.0);
  report("A8", pass && closed_forms,
         std::string("Poincare inequalities held on 1000 samples; u(t)=t gives ") +
             fmt(pc.lhs_l2) + " <= " + fmt(pc.rhs_l2) + " (a^3/3 vs a^3/2)");
}

// ---- A9: gradient components are the weak-form pairings ----
void a9() {
  const ModelParams p;
  std::mt19937_64 eng(109);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double omega = uniform(eng, 2.0, 8.0);
    const int k = uniform_int(eng, 1, 3);
    const int n = uniform_int(eng, 2, 24);
    const FourierTrajectory tr = random_trajectory(omega, k, n, 0.7, eng());
    const int M = 8 * n + 4;
    const ActionGradient g = action_gradient(p, tr, M);
    const double scale = 1.0 + grad_sup(g);

    const SampledTrajectory st = sample(tr, M);
    const double h = omega / M;
    for (int j = 1; j <= n; ++j) {
      const double nu = 2.0 * pi * j / omega;
      double pair_a = 0.0, pair_b = 0.0;
      for (int r = 0; r < M; ++r) {
        const State &s = st.states[r];
        const double arg = nu * st.times[r];
        const double sj = std::sin(arg);
        const double cj = std::cos(arg);
        pair_a += dl_dx(p, s) * sj + p.m * s.xdot * nu * cj;
        pair_b += dl_dphi(p, s) * sj +
                  (p.m * s.x * s.x + p.J) * s.phidot * nu * cj;
      }
      worst = std::max({worst, std::fabs(pair_a * h - g.da[j - 1]) / scale,
                        std::fabs(pair_b * h - g.db[j - 1]) / scale});
    }
  }
  report("A9", worst <= 1e-12,
         "weak-form pairings equal gradient components: max scaled err " +
             fmt(worst) + " (limit 1e-12)");
}

// ---- A10: spectral convergence of the residual in N ----
void a10() {
  const ModelParams p;
  std::vector<double> residuals;
  std::string levels;
  for (int n : {8, 16, 32, 64}) {
    OptimConfig cfg;
    cfg.modes = n; // quad defaults to 8N
    const OptimReport rep = find_orbit(p, 2.0 * pi, 1, cfg);
    const double resid = el_residual_profile(p, rep.trajectory, 4096);
    residuals.push_back(resid);
    levels += " N=" + std::to_string(n) + ":" + fmt(resid);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    decreasing = decreasing && residuals[i] < residuals[i - 1];
  }
  report("A10", decreasing, "residual strictly decreases:" + levels);
}

// ---- A11: CLI pipeline contract ----
int run_cmd(const fs::path &cwd, const std::string &args, std::string *out) {
  const fs::path log = cwd / "cmd_output.txt";
  const std::string cmd = "cd '" + cwd.string() + "' && '" + TUBEBALL_CLI_PATH +
                          "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  if (out != nullptr) {
    std::ifstream is(log);
    std::stringstream ss;
    ss << is.rdbuf();
    *out = ss.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void a11() {
  const fs::path dir = fs::temp_directory_path() / "tubeball_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  bool pass = true;
  std::string detail;

  const std::string find_args =
      "find --omega 6.283185307179586 --k 1 -o orbit.json";
  pass = pass && run_cmd(dir, find_args, nullptr) == 0;
  pass = pass && run_cmd(dir, "verify orbit.json", nullptr) == 0;
  pass = pass && run_cmd(dir, "sample orbit.json --points 512 -o orbit.csv",
                         nullptr) == 0;

  // energy column constant to 1e-6 relative
  double emin = 0.0, emax = 0.0;
  {
    std::ifstream is(dir / "orbit.csv");
    std::string line;
    std::getline(is, line); // header
    bool first = true;
    while (std::getline(is, line)) {
      const std::size_t pos = line.rfind(',');
      const double e = std::strtod(line.c_str() + pos + 1, nullptr);
      if (first) {
        emin = emax = e;
        first = false;
      } else {
        emin = std::min(emin, e);
        emax = std::max(emax, e);
      }
    }
  }
  const double erel = (emax - emin) / (1.0 + std::fabs(emax));
  pass = pass && erel < 1e-6;
  detail += "energy column spread " + fmt(erel);

  // determinism: identical rerun, byte-identical orbit file
  const std::string first_bytes = slurp(dir / "orbit.json");
  pass = pass && run_cmd(dir, find_args, nullptr) == 0;
  pass = pass && slurp(dir / "orbit.json") == first_bytes;

  // corrupt input exits 2
  std::ofstream(dir / "corrupt.json") << "{\"schema_version\":";
  pass = pass && run_cmd(dir, "verify corrupt.json", nullptr) == 2;
  pass = pass && run_cmd(dir, "sample corrupt.json", nullptr) == 2;

  report("A11", pass, "find -> verify -> sample pipeline: " + detail +
                          " (limit 1e-6), deterministic rerun, corrupt exits 2");
}

} // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  a1();
  a2();
  const std::vector<Solved> orbits = solve_reference_orbits();
  a3(orbits);
  a4(orbits);
  a5(orbits);
  a6(orbits);
  a7();
  a8();
  a9();
  a10();
  a11();
  const auto t1 = std::chrono::steady_clock::now();
  const double secs =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() /
      1000.0;
  std::printf("%d/11 criteria passed in %.1f s\n", 11 - g_failures, secs);
  return g_failures;
}

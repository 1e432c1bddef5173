// tubeball: find, verify and export periodic orbits of the tube-and-ball
// system. Exit codes: 0 success, 1 run failure (non-convergence, threshold
// violation, failed sweep pair), 2 invalid flags or malformed input files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tubeball/action.hpp"
#include "tubeball/model.hpp"
#include "tubeball/optimizer.hpp"
#include "tubeball/orbit_io.hpp"
#include "tubeball/trajectory.hpp"
#include "tubeball/verify.hpp"

namespace fs = std::filesystem;
using namespace tubeball;

namespace {

struct FindFlags {
  double omega = 0.0;
  int k = 1;
  ModelParams params;
  OptimConfig cfg;
  std::string out;
};

struct Thresholds {
  double el_residual = 1e-3;
  double shooting = 1e-3;
  double energy_drift = 1e-6;
  double lambda_rel_spread = 1e-4;
  double symmetry = 1e-10;
};

std::string default_orbit_name(double omega, int k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "orbit_w%.9g_k%d.json", omega, k);
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void add_optim_flags(CLI::App *cmd, FindFlags &f) {
  cmd->add_option("--modes", f.cfg.modes, "Fourier truncation order N");
  cmd->add_option("--quad", f.cfg.quad, "quadrature grid size M (0 = 8N)");
  cmd->add_option("--m", f.params.m, "ball mass");
  cmd->add_option("--J", f.params.J, "tube moment of inertia");
  cmd->add_option("--g", f.params.g, "gravity");
  cmd->add_option("--seed", f.cfg.seed, "random-start seed");
  cmd->add_option("--starts", f.cfg.starts, "number of starts");
  cmd->add_option("--gtol", f.cfg.gtol, "gradient sup-norm tolerance");
  cmd->add_option("--max-iters", f.cfg.max_iters, "iteration cap per start");
  cmd->add_option("--init-scale", f.cfg.init_scale,
                  "coefficient scale of random starts");
}

void validate_find_inputs(const FindFlags &f) {
  if (!(f.omega > 0.0) || !std::isfinite(f.omega)) {
    throw CLI::ValidationError("--omega must be positive");
  }
  if (f.k < 1) {
    throw CLI::ValidationError("--k must be >= 1");
  }
  if (!f.params.valid()) {
    throw CLI::ValidationError("--m, --J, --g must be positive");
  }
  check_config(f.cfg);
}

int verification_quad(const OrbitFile &file, int flag_value) {
  if (flag_value > 0) return flag_value;
  // fine grid: the verification side is cheap, so oversample
  return std::max(2048, 8 * static_cast<int>(file.a.size()));
}

int cmd_find(const FindFlags &f) {
  const fs::path out_path =
      f.out.empty() ? fs::path(default_orbit_name(f.omega, f.k)) : fs::path(f.out);
  const OptimReport report = find_orbit(f.params, f.omega, f.k, f.cfg);
  const OrbitFile file = make_orbit_file(f.params, f.cfg, report);
  save_orbit(file, out_path);

  const FourierTrajectory tr = to_trajectory(file);
  double max_x = 0.0;
  for (const State &s : sample(tr, 4096).states) {
    max_x = std::max(max_x, std::fabs(s.x));
  }

  std::cout << "converged in " << report.iterations << " iterations (start "
            << report.start_index << ")\n"
            << "action     = " << fmt(report.action) << "\n"
            << "grad_norm  = " << fmt(report.grad_norm) << "\n"
            << "max_abs_x  = " << fmt(max_x) << "\n"
            << "wrote " << out_path.string() << "\n";
  return 0;
}

int cmd_verify(const std::string &orbit_path, int rk_steps, int quad,
               const Thresholds &thr, const std::string &report_path) {
  const OrbitFile file = load_orbit(orbit_path);
  const FourierTrajectory tr = to_trajectory(file);
  const int M = verification_quad(file, quad);
  const VerifyReport rep = verify_orbit(file.params, tr, rk_steps, M);

  const double lambda_rel =
      rep.lambda_spread / std::max(std::fabs(rep.lambda_mean), 1e-300);
  const double coercivity_floor = -1e-9 * (1.0 + std::fabs(rep.action));

  struct Check {
    const char *name;
    double value;
    double limit;
    bool pass;
  };
  std::vector<Check> checks = {
      {"el_residual_max", rep.el_residual_max, thr.el_residual,
       rep.el_residual_max <= thr.el_residual},
      {"shooting_mismatch", rep.shooting_mismatch, thr.shooting,
       rep.shooting_mismatch <= thr.shooting},
      {"energy_drift", rep.energy_drift, thr.energy_drift,
       rep.energy_drift <= thr.energy_drift},
      {"lambda_rel_spread", lambda_rel, thr.lambda_rel_spread,
       lambda_rel <= thr.lambda_rel_spread},
      {"symmetry_err", rep.symmetry_err, thr.symmetry,
       rep.symmetry_err <= thr.symmetry},
  };
  if (rep.lambda_unit_form) {
    checks.push_back({"coercivity_margin", rep.coercivity_margin,
                      coercivity_floor,
                      rep.coercivity_margin >= coercivity_floor});
  }

  std::cout << "action            = " << fmt(rep.action) << "\n"
            << "coercivity_margin = " << fmt(rep.coercivity_margin) << "\n"
            << "lambda_mean       = " << fmt(rep.lambda_mean) << "\n"
            << "lambda_spread     = " << fmt(rep.lambda_spread) << "\n"
            << "max_abs_x         = " << fmt(rep.max_abs_x) << "\n"
            << "lambda form       = "
            << (rep.lambda_unit_form ? "unit (1+x^2)" : "general (m x^2+J)")
            << "\n";
  bool all_pass = true;
  for (const Check &c : checks) {
    std::cout << (c.pass ? "pass  " : "FAIL  ") << c.name << " = "
              << fmt(c.value) << (c.pass ? "  (limit " : "  (exceeds ")
              << fmt(c.limit) << ")\n";
    all_pass = all_pass && c.pass;
  }

  if (!report_path.empty()) {
    nlohmann::json j;
    j["el_residual_max"] = rep.el_residual_max;
    j["shooting_mismatch"] = rep.shooting_mismatch;
    j["energy_drift"] = rep.energy_drift;
    j["lambda_mean"] = rep.lambda_mean;
    j["lambda_spread"] = rep.lambda_spread;
    j["action"] = rep.action;
    j["coercivity_margin"] = rep.coercivity_margin;
    j["symmetry_err"] = rep.symmetry_err;
    j["max_abs_x"] = rep.max_abs_x;
    j["lambda_unit_form"] = rep.lambda_unit_form;
    j["pass"] = all_pass;
    std::ofstream os(report_path, std::ios::binary);
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("failed writing " + report_path);
  }
  return all_pass ? 0 : 1;
}

int cmd_sample(const std::string &orbit_path, int points,
               const std::string &out) {
  const OrbitFile file = load_orbit(orbit_path);
  const FourierTrajectory tr = to_trajectory(file);
  if (out.empty()) {
    write_samples_csv(std::cout, file.params, tr, points);
  } else {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + out);
    write_samples_csv(os, file.params, tr, points);
    if (!os) throw std::runtime_error("failed writing " + out);
  }
  return 0;
}

std::vector<double> parse_reals(const std::string &csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_ints(const std::string &csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

int cmd_sweep(FindFlags base, const std::string &omega_csv,
              const std::string &k_csv, const std::string &out_dir) {
  std::vector<double> omegas;
  std::vector<int> ks;
  try {
    omegas = omega_csv.empty() ? std::vector<double>{2.0 * 3.141592653589793}
                               : parse_reals(omega_csv);
    ks = k_csv.empty() ? std::vector<int>{1} : parse_ints(k_csv);
  } catch (const std::exception &) {
    std::cerr << "sweep: unparsable list\n";
    return 2;
  }
  if (omegas.empty() || ks.empty()) {
    std::cerr << "sweep: empty parameter list\n";
    return 2;
  }
  for (double w : omegas) {
    if (!(w > 0.0)) {
      std::cerr << "sweep: omega must be positive\n";
      return 2;
    }
  }
  for (int k : ks) {
    if (k < 1) {
      std::cerr << "sweep: k must be >= 1\n";
      return 2;
    }
  }

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  std::ofstream summary(dir / "summary.csv", std::ios::binary);
  if (!summary) throw std::runtime_error("cannot write summary.csv");
  summary << "omega,k,converged,action,max_abs_x,el_residual_max\n";

  bool all_converged = true;
  for (double w : omegas) {
    for (int k : ks) {
      FindFlags f = base;
      f.omega = w;
      f.k = k;
      bool converged = true;
      OptimReport best;
      try {
        best = find_orbit(f.params, w, k, f.cfg);
      } catch (const NoConvergenceError &) {
        converged = false;
        // keep the best non-converged report for the summary row
        OptimConfig relaxed = f.cfg;
        std::vector<OptimReport> reps = multistart(f.params, w, k, relaxed);
        best = reps.front();
      }
      all_converged = all_converged && converged;

      FourierTrajectory tr = best.trajectory;
      double max_x = 0.0;
      for (const State &s : sample(tr, 4096).states) {
        max_x = std::max(max_x, std::fabs(s.x));
      }
      const double resid =
          el_residual_profile(f.params, tr, std::max(2048, 8 * f.cfg.modes));
      if (converged) {
        const OrbitFile file = make_orbit_file(f.params, f.cfg, best);
        save_orbit(file, dir / default_orbit_name(w, k));
      }
      summary << fmt(w) << ',' << k << ',' << (converged ? 1 : 0) << ','
              << fmt(best.action) << ',' << fmt(max_x) << ',' << fmt(resid)
              << '\n';
      std::cout << "omega=" << fmt(w) << " k=" << k
                << (converged ? " converged, action = " + fmt(best.action)
                              : " DID NOT CONVERGE")
                << "\n";
    }
  }
  if (!summary) throw std::runtime_error("failed writing summary.csv");
  return all_converged ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"periodic orbits of a ball sliding in a rotating tube"};
  app.require_subcommand(1);

  FindFlags find_flags;
  CLI::App *find = app.add_subcommand("find", "minimize the action for one (omega, k)");
  find->add_option("--omega", find_flags.omega, "period")->required();
  find->add_option("--k", find_flags.k, "winding number")->required();
  add_optim_flags(find, find_flags);
  find->add_option("-o,--output", find_flags.out, "orbit file path");

  std::string verify_path, verify_report;
  int rk_steps = 16384;
  int verify_quad = 0;
  Thresholds thr;
  CLI::App *verify = app.add_subcommand("verify", "re-check a stored orbit");
  verify->add_option("orbit", verify_path, "orbit JSON file")->required();
  verify->add_option("--rk-steps", rk_steps, "shooting integrator steps");
  verify->add_option("--quad", verify_quad, "verification grid size (0 = auto)");
  verify->add_option("--max-el-residual", thr.el_residual, "residual threshold");
  verify->add_option("--max-shooting", thr.shooting, "shooting threshold");
  verify->add_option("--max-energy-drift", thr.energy_drift, "drift threshold");
  verify->add_option("--max-lambda-spread", thr.lambda_rel_spread,
                     "relative lambda spread threshold");
  verify->add_option("--max-symmetry", thr.symmetry, "symmetry threshold");
  verify->add_option("--report", verify_report, "write JSON report here");

  std::string sample_path, sample_out;
  int points = 1000;
  CLI::App *samplec = app.add_subcommand("sample", "emit one period as CSV");
  samplec->add_option("orbit", sample_path, "orbit JSON file")->required();
  samplec->add_option("--points", points, "rows = points + 1");
  samplec->add_option("-o,--output", sample_out, "CSV path (default stdout)");

  FindFlags sweep_flags;
  std::string omega_list, k_list, sweep_dir = ".";
  CLI::App *sweep = app.add_subcommand("sweep", "grid of (omega, k) solves");
  sweep->add_option("--omega-list", omega_list, "comma-separated periods");
  sweep->add_option("--k-list", k_list, "comma-separated winding numbers");
  add_optim_flags(sweep, sweep_flags);
  sweep->add_option("-o,--output", sweep_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (find->parsed()) {
      validate_find_inputs(find_flags);
      return cmd_find(find_flags);
    }
    if (verify->parsed()) {
      if (rk_steps < 16) throw CLI::ValidationError("--rk-steps must be >= 16");
      return cmd_verify(verify_path, rk_steps, verify_quad, thr, verify_report);
    }
    if (samplec->parsed()) {
      if (points < 1) throw CLI::ValidationError("--points must be >= 1");
      return cmd_sample(sample_path, points, sample_out);
    }
    if (sweep->parsed()) {
      if (!sweep->count("--omega-list") && !sweep->count("--k-list")) {
        std::cerr << "sweep: need --omega-list and/or --k-list\n";
        return 2;
      }
      if (!sweep_flags.params.valid()) {
        throw CLI::ValidationError("--m, --J, --g must be positive");
      }
      check_config(sweep_flags.cfg);
      return cmd_sweep(sweep_flags, omega_list, k_list, sweep_dir);
    }
  } catch (const CLI::ValidationError &e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument &e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const OrbitIoError &e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const NoConvergenceError &e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}

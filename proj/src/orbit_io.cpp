#include "tubeball/orbit_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace tubeball {

namespace {
using nlohmann::json;

std::vector<double> to_std(const Eigen::VectorXd &v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double> &v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
} // namespace

OrbitFile make_orbit_file(const ModelParams &p, const OptimConfig &cfg,
                          const OptimReport &report) {
  OrbitFile file;
  file.omega = report.trajectory.omega;
  file.k = report.trajectory.k;
  file.params = p;
  file.a = report.trajectory.a;
  file.b = report.trajectory.b;
  file.config = cfg;
  file.config.quad = cfg.quad_points(); // store the resolved grid size
  file.action = report.action;
  file.grad_norm = report.grad_norm;
  file.iterations = report.iterations;
  return file;
}

FourierTrajectory to_trajectory(const OrbitFile &file) {
  FourierTrajectory tr;
  tr.omega = file.omega;
  tr.k = file.k;
  tr.a = file.a;
  tr.b = file.b;
  check_valid(tr);
  return tr;
}

std::string orbit_to_json(const OrbitFile &file) {
  json j;
  j["schema_version"] = file.schema_version;
  j["omega"] = file.omega;
  j["k"] = file.k;
  j["params"] = {{"m", file.params.m}, {"J", file.params.J}, {"g", file.params.g}};
  j["a"] = to_std(file.a);
  j["b"] = to_std(file.b);
  j["provenance"] = {
      {"config",
       {{"modes", file.config.modes},
        {"quad", file.config.quad},
        {"gtol", file.config.gtol},
        {"max_iters", file.config.max_iters},
        {"memory", file.config.memory},
        {"ls_shrink", file.config.ls_shrink},
        {"ls_c1", file.config.ls_c1},
        {"starts", file.config.starts},
        {"seed", file.config.seed},
        {"init_scale", file.config.init_scale},
        {"start_seeds", file.config.start_seeds}}},
      {"action", file.action},
      {"grad_norm", file.grad_norm},
      {"iterations", file.iterations}};
  return j.dump(2) + "\n";
}

void save_orbit(const OrbitFile &file, const std::filesystem::path &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os << orbit_to_json(file);
  if (!os) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

OrbitFile load_orbit(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw OrbitIoError("cannot open " + path.string());
  }
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception &e) {
    throw OrbitIoError(path.string() + ": " + e.what());
  }

  OrbitFile file;
  try {
    file.schema_version = j.at("schema_version").get<int>();
    if (file.schema_version != 1) {
      throw OrbitIoError(path.string() + ": unsupported schema_version");
    }
    file.omega = j.at("omega").get<double>();
    file.k = j.at("k").get<int>();
    const json &prm = j.at("params");
    file.params.m = prm.at("m").get<double>();
    file.params.J = prm.at("J").get<double>();
    file.params.g = prm.at("g").get<double>();
    file.a = from_std(j.at("a").get<std::vector<double>>());
    file.b = from_std(j.at("b").get<std::vector<double>>());
    const json &prov = j.at("provenance");
    const json &cfg = prov.at("config");
    file.config.modes = cfg.at("modes").get<int>();
    file.config.quad = cfg.at("quad").get<int>();
    file.config.gtol = cfg.at("gtol").get<double>();
    file.config.max_iters = cfg.at("max_iters").get<int>();
    file.config.memory = cfg.at("memory").get<int>();
    file.config.ls_shrink = cfg.at("ls_shrink").get<double>();
    file.config.ls_c1 = cfg.at("ls_c1").get<double>();
    file.config.starts = cfg.at("starts").get<int>();
    file.config.seed = cfg.at("seed").get<std::uint64_t>();
    file.config.init_scale = cfg.at("init_scale").get<double>();
    file.config.start_seeds = cfg.at("start_seeds").get<std::vector<std::uint64_t>>();
    file.action = prov.at("action").get<double>();
    file.grad_norm = prov.at("grad_norm").get<double>();
    file.iterations = prov.at("iterations").get<int>();
  } catch (const json::exception &e) {
    throw OrbitIoError(path.string() + ": " + e.what());
  }

  if (!(file.omega > 0.0) || !std::isfinite(file.omega) || file.k < 1 ||
      !file.params.valid() || file.a.size() < 1 ||
      file.a.size() != file.b.size() || !file.a.allFinite() ||
      !file.b.allFinite()) {
    throw OrbitIoError(path.string() + ": invalid orbit data");
  }
  return file;
}

void write_samples_csv(std::ostream &os, const ModelParams &p,
                       const FourierTrajectory &tr, int points) {
  if (points < 1) {
    throw std::invalid_argument("write_samples_csv: need points >= 1");
  }
  os << "t,x,phi,xdot,phidot,energy\n";
  for (int i = 0; i <= points; ++i) {
    const double t = (i * tr.omega) / points;
    const State s = eval(tr, t).state;
    os << fmt17(t) << ',' << fmt17(s.x) << ',' << fmt17(s.phi) << ','
       << fmt17(s.xdot) << ',' << fmt17(s.phidot) << ','
       << fmt17(energy(p, s)) << '\n';
  }
}

} // namespace tubeball

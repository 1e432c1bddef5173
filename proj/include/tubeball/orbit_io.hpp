#ifndef TUBEBALL_ORBIT_IO_HPP
#define TUBEBALL_ORBIT_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "tubeball/model.hpp"
#include "tubeball/optimizer.hpp"
#include "tubeball/trajectory.hpp"

namespace tubeball {

/// Orbit file schema v1: omega, k, model parameters, coefficient arrays and
/// the provenance of the minimization run. JSON with round-trip-exact number
/// formatting; write -> read -> write is byte-identical.
struct OrbitFile {
  int schema_version = 1;
  double omega = 0.0;
  int k = 1;
  ModelParams params;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  // provenance
  OptimConfig config;
  double action = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
};

class OrbitIoError : public std::runtime_error {
public:
  explicit OrbitIoError(const std::string &what) : std::runtime_error(what) {}
};

OrbitFile make_orbit_file(const ModelParams &p, const OptimConfig &cfg,
                          const OptimReport &report);

FourierTrajectory to_trajectory(const OrbitFile &file);

std::string orbit_to_json(const OrbitFile &file);
void save_orbit(const OrbitFile &file, const std::filesystem::path &path);

/// Throws OrbitIoError on unreadable, malformed or schema-violating input.
OrbitFile load_orbit(const std::filesystem::path &path);

/// CSV sample of one period: header t,x,phi,xdot,phidot,energy and points+1
/// rows at t_i = i*omega/points (right endpoint included so plots close the
/// loop). 17 significant digits, '\n' newlines.
void write_samples_csv(std::ostream &os, const ModelParams &p,
                       const FourierTrajectory &tr, int points);

} // namespace tubeball

#endif // TUBEBALL_ORBIT_IO_HPP

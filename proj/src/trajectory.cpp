#include "tubeball/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tubeball/trig.hpp"

namespace tubeball {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// uniform in [-1, 1), deterministic across platforms (the raw engine is
// standardized; std::uniform_real_distribution is not)
double symmetric_uniform(std::mt19937_64 &eng) {
  const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}
} // namespace

void check_valid(const FourierTrajectory &tr) {
  if (!(tr.omega > 0.0) || !std::isfinite(tr.omega)) {
    throw std::invalid_argument("FourierTrajectory: omega must be positive");
  }
  if (tr.k < 1) {
    throw std::invalid_argument("FourierTrajectory: winding number k must be >= 1");
  }
  if (tr.a.size() < 1 || tr.a.size() != tr.b.size()) {
    throw std::invalid_argument(
        "FourierTrajectory: need equal, nonempty coefficient vectors");
  }
  if (!tr.a.allFinite() || !tr.b.allFinite()) {
    throw std::invalid_argument("FourierTrajectory: coefficients must be finite");
  }
}

Jet eval(const FourierTrajectory &tr, double t) {
  const int n = tr.modes();
  const double r_full = t / tr.omega;
  const double r = std::fmod(r_full, 1.0); // exact; keeps the sign of t
  const double nu0 = kTwoPi / tr.omega;

  double x = 0.0, xd = 0.0, xdd = 0.0;
  double ps = 0.0, psd = 0.0, psdd = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double s = sinpi(2.0 * j * r);
    const double c = cospi(2.0 * j * r);
    const double nu = nu0 * j;
    const double aj = tr.a[j - 1];
    const double bj = tr.b[j - 1];
    x += aj * s;
    xd += aj * nu * c;
    xdd -= aj * nu * nu * s;
    ps += bj * s;
    psd += bj * nu * c;
    psdd -= bj * nu * nu * s;
  }

  Jet jet;
  jet.state.x = x;
  jet.state.xdot = xd;
  // winding term grouped as 2*pi*(k*r) so that phi(omega/2) rounds to
  // exactly pi*k
  jet.state.phi = kTwoPi * (tr.k * r_full) + ps;
  jet.state.phidot = nu0 * tr.k + psd;
  jet.accel.xddot = xdd;
  jet.accel.phiddot = psdd;
  return jet;
}

SampledTrajectory sample(const FourierTrajectory &tr, int M) {
  if (M < 2) {
    throw std::invalid_argument("sample: need M >= 2 grid points");
  }
  SampledTrajectory out;
  out.omega = tr.omega;
  out.k = tr.k;
  out.times.resize(M);
  out.states.resize(M);
  out.accels.resize(M);
  for (int i = 0; i < M; ++i) {
    const double t = (i * tr.omega) / M;
    const Jet jet = eval(tr, t);
    out.times[i] = t;
    out.states[i] = jet.state;
    out.accels[i] = jet.accel;
  }
  return out;
}

SobolevNorms sobolev_norms(const FourierTrajectory &tr) {
  const double nu0 = kTwoPi / tr.omega;
  double sx = 0.0;
  double sp = 0.0;
  for (int j = 1; j <= tr.modes(); ++j) {
    const double nu = nu0 * j;
    sx += tr.a[j - 1] * tr.a[j - 1] * nu * nu;
    sp += tr.b[j - 1] * tr.b[j - 1] * nu * nu;
  }
  const double c0 = nu0 * tr.k;
  SobolevNorms norms;
  norms.xdot = std::sqrt(0.5 * tr.omega * sx);
  norms.phidot = std::sqrt(tr.omega * c0 * c0 + 0.5 * tr.omega * sp);
  return norms;
}

FourierTrajectory random_trajectory(double omega, int k, int N, double scale,
                                    std::uint64_t seed) {
  if (!(omega > 0.0) || k < 1 || N < 1 || !(scale >= 0.0)) {
    throw std::invalid_argument("random_trajectory: bad omega/k/N/scale");
  }
  FourierTrajectory tr;
  tr.omega = omega;
  tr.k = k;
  tr.a.resize(N);
  tr.b.resize(N);
  std::mt19937_64 eng(seed);
  for (int j = 1; j <= N; ++j) {
    tr.a[j - 1] = symmetric_uniform(eng) * scale / j;
  }
  for (int j = 1; j <= N; ++j) {
    tr.b[j - 1] = symmetric_uniform(eng) * scale / j;
  }
  return tr;
}

} // namespace tubeball

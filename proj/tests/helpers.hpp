#ifndef TUBEBALL_TESTS_HELPERS_HPP
#define TUBEBALL_TESTS_HELPERS_HPP

#include <random>

namespace testutil {

inline double uniform(std::mt19937_64 &eng, double lo, double hi) {
  const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline int uniform_int(std::mt19937_64 &eng, int lo, int hi) {
  return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace testutil

#endif

#pragma once

// Shared helpers for the unit and acceptance tests.

#include <cmath>
#include <random>

#include "orbitforge/integrate.hpp"

namespace orbitforge::testing {

inline State3 on_attractor(double t = 10.0, State3 seed = {1.0, 1.0, 1.0}) { return flow(seed, LorenzParams{}, t); }

inline State3 random_state(std::mt19937_64& rng, double lo = -20.0, double hi = 20.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng) + 25.0};
}

// Haar-ish random rotation from a normalized random quaternion.
inline Matrix3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4] = {n(rng), n(rng), n(rng), n(rng)};
  const double len = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  for (double& v : q) v /= len;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Matrix3 m;
  m(0, 0) = 1 - 2 * (y * y + z * z);
  m(0, 1) = 2 * (x * y - z * w);
  m(0, 2) = 2 * (x * z + y * w);
  m(1, 0) = 2 * (x * y + z * w);
  m(1, 1) = 1 - 2 * (x * x + z * z);
  m(1, 2) = 2 * (y * z - x * w);
  m(2, 0) = 2 * (x * z - y * w);
  m(2, 1) = 2 * (y * z + x * w);
  m(2, 2) = 1 - 2 * (x * x + y * y);
  return m;
}

}  // namespace orbitforge::testing

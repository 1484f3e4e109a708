#pragma once

#include <complex>
#include <vector>

#include "orbitforge/vec3.hpp"

namespace orbitforge {

// Lorenz parameters. Defaults are Lorenz's classical values; eta = 8/3 is
// stored as the nearest binary double.
struct LorenzParams {
  double sigma = 10.0;
  double eta = 8.0 / 3.0;
  double r = 28.0;

  // Throws Error(InvalidArgument) unless all three are strictly positive and finite.
  void validate() const;

  // Divergence of the vector field, constant in phase space.
  double divergence() const noexcept { return -(sigma + 1.0 + eta); }
};

// Vector field (sigma(y - x), r x - y - x z, x y - eta z).
template <class T>
constexpr Vec3<T> rhs(const Vec3<T>& s, const LorenzParams& p) {
  return {p.sigma * (s.y - s.x), p.r * s.x - s.y - s.x * s.z, s.x * s.y - p.eta * s.z};
}

// Stability matrix [[-sigma, sigma, 0], [r - z, -1, -x], [y, x, -eta]].
template <class T>
constexpr Mat3<T> jacobian(const Vec3<T>& s, const LorenzParams& p) {
  Mat3<T> m;
  m(0, 0) = T(-p.sigma);
  m(0, 1) = T(p.sigma);
  m(0, 2) = T(0.0);
  m(1, 0) = p.r - s.z;
  m(1, 1) = T(-1.0);
  m(1, 2) = -s.x;
  m(2, 0) = s.y;
  m(2, 1) = s.x;
  m(2, 2) = T(-p.eta);
  return m;
}

// Second-derivative bilinear form of the field evaluated on (v, v). The field
// is quadratic so this is constant in the base point.
template <class T>
constexpr Vec3<T> hessian_form(const Vec3<T>& v) {
  return {T(0.0), -2.0 * (v.x * v.z), 2.0 * (v.x * v.y)};
}

// (x, y, z) -> (-x, -y, z), the equivariance of the Lorenz field.
constexpr State3 symmetry(const State3& s) { return {-s.x, -s.y, s.z}; }

enum class FixedPointKind { Origin, Wing };

struct FixedPointReport {
  State3 location;
  // Spectrum of the stability matrix, sorted by descending real part then
  // descending imaginary part.
  std::vector<std::complex<double>> eigenvalues;
  FixedPointKind classification = FixedPointKind::Origin;
};

// Eigenvalues of a real 3x3 matrix from its characteristic cubic, polished
// by Newton on the polynomial. Sorted as in FixedPointReport.
std::vector<std::complex<double>> eigenvalues(const Matrix3& m);

// Origin, plus the symmetric wing pair when r > 1.
std::vector<FixedPointReport> fixed_points(const LorenzParams& p);

// Exact time derivatives z_t, z_tt, z_ttt of the trajectory through s.
// order must be 1, 2 or 3; the result holds `order` vectors.
std::vector<State3> time_derivatives(const State3& s, const LorenzParams& p, int order);

}  // namespace orbitforge

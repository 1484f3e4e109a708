#include "orbitforge/lorenz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbitforge/error.hpp"

namespace orbitforge {

void LorenzParams::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(sigma) || !ok(eta) || !ok(r))
    throw Error(ErrorCode::InvalidArgument, "Lorenz parameters must be finite and strictly positive");
}

namespace {

using cplx = std::complex<double>;

// Roots of t^3 + a t^2 + b t + c.
std::vector<cplx> cubic_roots(double a, double b, double c) {
  // Depressed cubic u^3 + p u + q with t = u - a/3.
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = q * q / 4.0 + p * p * p / 27.0;

  std::vector<cplx> roots;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    const double re = -(u + v) / 2.0;
    const double im = (u - v) * std::sqrt(3.0) / 2.0;
    roots = {cplx(u + v - shift, 0.0), cplx(re - shift, im), cplx(re - shift, -im)};
  } else {
    // Three real roots, trigonometric form.
    const double m = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
    double arg = 0.0;
    if (m > 0.0) arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.emplace_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift, 0.0);
  }

  // Newton polish on the original polynomial.
  for (auto& t : roots) {
    for (int it = 0; it < 8; ++it) {
      const cplx f = ((t + a) * t + b) * t + c;
      const cplx df = (3.0 * t + 2.0 * a) * t + b;
      if (std::abs(df) == 0.0) break;
      const cplx step = f / df;
      t -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
    }
    if (std::fabs(t.imag()) < 1e-14 * std::max(1.0, std::fabs(t.real()))) t = cplx(t.real(), 0.0);
  }
  return roots;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Matrix3& m) {
  const double tr = m(0, 0) + m(1, 1) + m(2, 2);
  const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                        m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const double det = determinant(m);
  // det(t I - M) = t^3 - tr t^2 + minors t - det
  auto roots = cubic_roots(-tr, minors, -det);
  std::sort(roots.begin(), roots.end(), [](const cplx& u, const cplx& v) {
    if (u.real() != v.real()) return u.real() > v.real();
    return u.imag() > v.imag();
  });
  return roots;
}

std::vector<FixedPointReport> fixed_points(const LorenzParams& p) {
  p.validate();
  std::vector<FixedPointReport> out;
  const State3 origin{0.0, 0.0, 0.0};
  out.push_back({origin, eigenvalues(jacobian(origin, p)), FixedPointKind::Origin});
  if (p.r > 1.0) {
    const double w = std::sqrt(p.eta * (p.r - 1.0));
    for (double sgn : {1.0, -1.0}) {
      const State3 c{sgn * w, sgn * w, p.r - 1.0};
      out.push_back({c, eigenvalues(jacobian(c, p)), FixedPointKind::Wing});
    }
  }
  return out;
}

std::vector<State3> time_derivatives(const State3& s, const LorenzParams& p, int order) {
  if (order < 1 || order > 3) throw Error(ErrorCode::InvalidArgument, "derivative order must be 1, 2 or 3");
  std::vector<State3> d;
  d.reserve(static_cast<std::size_t>(order));
  const State3 v = rhs(s, p);
  d.push_back(v);
  if (order == 1) return d;
  const Matrix3 j = jacobian(s, p);
  const State3 a = j * v;
  d.push_back(a);
  if (order == 2) return d;
  d.push_back(j * a + hessian_form(v));
  return d;
}

}  // namespace orbitforge

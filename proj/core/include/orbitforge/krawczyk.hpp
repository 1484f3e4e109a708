#pragma once

// Krawczyk existence test K(z) = c - M F(c) - (M F'(z) - I)(z - c).

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "orbitforge/closure.hpp"
#include "orbitforge/interval.hpp"

namespace orbitforge {

struct KrawczykVerdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  IntervalVector k_box;
  IntervalVector input_box;

  double k_width_max() const { return max_width(k_box); }
};

// Existence when K lies in the interior of the box, NoOrbit when some
// component of K misses the box, Inconclusive otherwise.
VerdictStatus classify(const IntervalVector& k_box, const IntervalVector& input_box);

// Inverse of F'(c). Throws Error(SingularM) when the 2-norm condition number
// exceeds 1e12.
Eigen::MatrixXd krawczyk_preconditioner(const Eigen::MatrixXd& fprime_center);

// K for a box with midpoint `center`, given F(center) and F' over the box as
// intervals and the preconditioner m.
KrawczykVerdict krawczyk_operator(const std::vector<double>& center, const IntervalVector& box,
                                  const IntervalVector& f_center, const IntervalMatrix& fprime_box,
                                  const Eigen::MatrixXd& m);

// Box of half-width `radius` around the shooting state's points; F and F'
// from interval_poincare.
KrawczykVerdict krawczyk(const ShootingState& s, double radius, const ClosureConfig& cfg,
                         double defect_safety = 10.0);

// Verifies every orbit at `radius`, once more at radius / 10 when the first
// attempt is inconclusive or the enclosure fails, and stores the outcome in
// orbit.verified. Orbits are processed on up to `threads` workers.
void verify_census(std::vector<PeriodicOrbit>& orbits, double radius, const ClosureConfig& cfg,
                   std::size_t threads = 1);

}  // namespace orbitforge

#pragma once

// Interval enclosures of the Lorenz flow and of its Poincare return map.
//
// The integrator is a first-order Lohner method. A set is held as
// c + A r with a point centre c, an orthogonal frame A re-chosen by QR every
// step, and an interval remainder r. Each RK4 step maps the centre in interval
// arithmetic and the remainder through the interval Jacobian of the step over
// the set's hull. The RK4 truncation error is covered by a per-step defect
// taken from a step-doubling estimate at the centre, inflated by
// defect_safety. That bound is measured rather than proven, so results are
// enclosures within this model, not computer-assisted proofs.

#include <array>

#include "orbitforge/closure.hpp"
#include "orbitforge/interval.hpp"

namespace orbitforge {

using IVec3 = Vec3<Interval>;
using IMat3 = Mat3<Interval>;

struct EnclosureConfig {
  LorenzParams params;
  double dt = kDefaultDt;
  double defect_safety = 10.0;
  // Error(EnclosureBlowup) once any component of the hull is wider than this.
  double blowup_width = 1.0;
};

struct LohnerSet {
  State3 center;
  Matrix3 frame = Matrix3::identity();
  IVec3 remainder;

  IVec3 hull() const;
};

struct FlowEnclosure {
  IVec3 state;
  // Derivative of the time-t map over the whole input box.
  IMat3 monodromy;
};

// Enclosure of the time-t image of `box` and of the flow derivative over it.
FlowEnclosure interval_flow(const IVec3& box, double t, const EnclosureConfig& cfg);

struct PoincareEnclosure {
  std::array<Interval, 2> image;
  Interval return_time;
  // Row-major d(next x, next y) / d(x, y) over the box; zero when not requested.
  std::array<Interval, 4> derivative{};
};

// Return map over an in-plane box. The crossing time of the box midpoint
// from the non-interval map places the final approach; the last stretch is
// covered by an a-priori enclosure on which zdot keeps the crossing sign.
// Throws Error(CrossingNotIsolated) when the box cannot be shown to cross
// once and transversally, Error(EnclosureBlowup) on runaway widths.
PoincareEnclosure interval_poincare(const std::array<Interval, 2>& box, const ClosureConfig& cfg,
                                    bool with_derivative = true, double defect_safety = 10.0);

}  // namespace orbitforge

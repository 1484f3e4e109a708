#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "orbitforge/lorenz.hpp"

namespace orbitforge {

inline constexpr double kDefaultDt = 0.0005;
// Any component beyond this magnitude is treated as a blow-up.
inline constexpr double kDivergenceBound = 1e6;

// One classical Runge-Kutta step of the Lorenz flow.
template <class T>
constexpr Vec3<T> rk4_step(const Vec3<T>& s, const LorenzParams& p, double h) {
  const Vec3<T> k1 = rhs(s, p);
  const Vec3<T> k2 = rhs(s + (0.5 * h) * k1, p);
  const Vec3<T> k3 = rhs(s + (0.5 * h) * k2, p);
  const Vec3<T> k4 = rhs(s + h * k3, p);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Derivative of the rk4_step map with respect to the initial state. This is
// exactly what Runge-Kutta applied to the variational equation produces, so
// composing it along a trajectory gives the monodromy of the discrete flow.
template <class T>
constexpr Mat3<T> rk4_step_jacobian(const Vec3<T>& s, const LorenzParams& p, double h) {
  const Mat3<T> eye = Mat3<T>::identity();
  const Vec3<T> k1 = rhs(s, p);
  const Mat3<T> d1 = jacobian(s, p);
  const Vec3<T> s2 = s + (0.5 * h) * k1;
  const Vec3<T> k2 = rhs(s2, p);
  const Mat3<T> d2 = jacobian(s2, p) * (eye + (0.5 * h) * d1);
  const Vec3<T> s3 = s + (0.5 * h) * k2;
  const Vec3<T> k3 = rhs(s3, p);
  const Mat3<T> d3 = jacobian(s3, p) * (eye + (0.5 * h) * d2);
  const Vec3<T> s4 = s + h * k3;
  const Mat3<T> d4 = jacobian(s4, p) * (eye + h * d3);
  return eye + (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
}

// Uniformly sampled trajectory: samples[i] is the state at t0 + i * dt.
struct Trajectory {
  double t0 = 0.0;
  double dt = kDefaultDt;
  std::vector<State3> samples;

  std::size_t size() const noexcept { return samples.size(); }
  double time(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * dt; }
};

struct FlowResult {
  State3 final_state;
  Matrix3 monodromy = Matrix3::identity();
  double elapsed = 0.0;
};

// n_steps fixed RK4 steps; the result has n_steps + 1 samples. Throws
// Error(Divergence) naming the failing step on overflow or NaN.
Trajectory integrate(const State3& s0, const LorenzParams& p, double dt, std::size_t n_steps);

// Endpoint after duration t. Whole steps of dt are taken first and a final
// shortened step lands exactly on t.
State3 flow(const State3& s0, const LorenzParams& p, double t, double dt = kDefaultDt);

// Flow plus the derivative of the time-t map, integrated jointly.
FlowResult flow_with_variational(const State3& s0, const LorenzParams& p, double t, double dt = kDefaultDt);

// Splits a duration into whole steps of dt plus a remainder in [0, dt).
// Durations within 1e-9 relative of a whole multiple have no remainder.
struct StepPlan {
  std::size_t whole_steps = 0;
  double remainder = 0.0;
};
StepPlan plan_steps(double t, double dt);

// CSV with header "t,x,y,z", 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace orbitforge

#include "orbitforge/integrate.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "orbitforge/error.hpp"

namespace orbitforge {

namespace {

void check_finite(const State3& s, std::size_t step) {
  const bool bad = !std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z) || max_abs(s) > kDivergenceBound;
  if (bad) throw Error(ErrorCode::Divergence, "state left the finite domain at step " + std::to_string(step));
}

void check_step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
}

}  // namespace

StepPlan plan_steps(double t, double dt) {
  check_step(dt);
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "duration must be non-negative");
  const double ratio = t / dt;
  const double nearest = std::round(ratio);
  if (std::fabs(ratio - nearest) <= 1e-9 * std::fmax(1.0, nearest))
    return {static_cast<std::size_t>(nearest), 0.0};
  const double whole = std::floor(ratio);
  return {static_cast<std::size_t>(whole), t - whole * dt};
}

Trajectory integrate(const State3& s0, const LorenzParams& p, double dt, std::size_t n_steps) {
  check_step(dt);
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "n_steps must be at least 1");
  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(n_steps + 1);
  traj.samples.push_back(s0);
  State3 s = s0;
  for (std::size_t k = 0; k < n_steps; ++k) {
    s = rk4_step(s, p, dt);
    check_finite(s, k + 1);
    traj.samples.push_back(s);
  }
  return traj;
}

State3 flow(const State3& s0, const LorenzParams& p, double t, double dt) {
  const StepPlan plan = plan_steps(t, dt);
  State3 s = s0;
  for (std::size_t k = 0; k < plan.whole_steps; ++k) {
    s = rk4_step(s, p, dt);
    check_finite(s, k + 1);
  }
  if (plan.remainder > 0.0) {
    s = rk4_step(s, p, plan.remainder);
    check_finite(s, plan.whole_steps + 1);
  }
  return s;
}

FlowResult flow_with_variational(const State3& s0, const LorenzParams& p, double t, double dt) {
  const StepPlan plan = plan_steps(t, dt);
  FlowResult out;
  out.final_state = s0;
  out.elapsed = t;
  auto advance = [&](double h, std::size_t step) {
    out.monodromy = rk4_step_jacobian(out.final_state, p, h) * out.monodromy;
    out.final_state = rk4_step(out.final_state, p, h);
    check_finite(out.final_state, step);
  };
  for (std::size_t k = 0; k < plan.whole_steps; ++k) advance(dt, k + 1);
  if (plan.remainder > 0.0) advance(plan.remainder, plan.whole_steps + 1);
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y,z\n";
  char buf[128];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const State3& s = traj.samples[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", traj.time(i), s.x, s.y, s.z);
    out << buf;
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,y,z", 0) != 0)
    throw Error(ErrorCode::IoError, "trajectory CSV must start with header t,x,y,z");
  std::vector<double> times;
  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t = 0.0;
    State3 s;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &s.x, &s.y, &s.z) != 4)
      throw Error(ErrorCode::IoError, "malformed trajectory row: " + line);
    times.push_back(t);
    traj.samples.push_back(s);
  }
  if (traj.samples.empty()) throw Error(ErrorCode::IoError, "trajectory CSV has no samples");
  traj.t0 = times.front();
  if (times.size() > 1) traj.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  return traj;
}

}  // namespace orbitforge

#pragma once

// Newton multiple shooting on the Poincare section.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "orbitforge/symbolic.hpp"

namespace orbitforge {

using SectionPoint = std::array<double, 2>;

struct ClosureConfig {
  LorenzParams params;
  SectionConfig section;
  double dt = kDefaultDt;
  double newton_tol = 1e-11;
  int max_iter = 50;
  int max_halvings = 8;
  // Allowed return time of a single section-to-section flight.
  double min_return = 0.2;
  double max_return = 1.5;
  // Poincare map gives up after this much flow time.
  double max_flight = 5.0;
};

// Lift of an in-plane point to phase space.
inline State3 lift(const SectionPoint& q, const SectionConfig& cfg) { return {q[0], q[1], cfg.plane_z}; }

struct PoincareResult {
  SectionPoint point{};
  State3 state;
  double return_time = 0.0;
  // d(next x, next y) / d(x, y).
  Eigen::Matrix2d derivative = Eigen::Matrix2d::Zero();
};

// First return to the section after leaving q. Throws Error(NoReturn) after
// max_flight without a crossing, Error(TangentialCrossing) on a grazing return.
PoincareResult poincare_map(const SectionPoint& q, const ClosureConfig& cfg);

struct ShootingState {
  std::vector<SectionPoint> points;
  std::vector<double> return_times;

  std::size_t period() const noexcept { return points.size(); }
};

struct ShootingEvaluation {
  // F_k = x_{k+1 mod p} - Omega(x_k), stacked as (x, y) pairs.
  Eigen::VectorXd residual;
  // Blocks -DOmega(x_k) on the diagonal and I at column block k+1 mod p.
  Eigen::MatrixXd jacobian;
  std::vector<PoincareResult> maps;

  double max_residual() const { return residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0; }
};

ShootingEvaluation shooting_residual(const ShootingState& s, const ClosureConfig& cfg);

enum class VerdictStatus { Unverified, Existence, NoOrbit, Inconclusive };

struct VerificationRecord {
  VerdictStatus status = VerdictStatus::Unverified;
  double radius = 0.0;
  double k_width_max = 0.0;
  int retries = 0;
};

struct PeriodicOrbit {
  SymbolSequence sequence;
  ShootingState shooting;
  double T = 0.0;
  double residual = 0.0;
  int iterations = 0;
  VerificationRecord verified;
};

// Labels of the section points in order, as read by crossing_label.
SymbolSequence orbit_labels(const ShootingState& s, const SectionConfig& cfg);

// Damped Newton on the shooting residual until max|F| < newton_tol. When
// `expected` is given, the converged orbit's canonical sequence must equal it.
// Throws Error(NoConvergence) after max_iter iterations or when a return time
// leaves (min_return, max_return), Error(LabelMismatch) on a sequence change.
PeriodicOrbit newton_close(const ShootingState& initial, const ClosureConfig& cfg,
                           const std::optional<SymbolSequence>& expected = std::nullopt);

// Seeds for `seq`, best first: a library orbit with that sequence, then
// blocks of consecutive attractor crossings whose labels spell a rotation of
// the word, ranked by how nearly the block closes. At most max_seeds.
std::vector<ShootingState> seed_candidates(const SymbolSequence& seq, const std::vector<PeriodicOrbit>& library,
                                           const std::vector<Crossing>& attractor, std::size_t max_seeds = 8);

// The first of seed_candidates. Throws Error(SeedUnavailable) if there is none.
ShootingState seed_from_sequence(const SymbolSequence& seq, const std::vector<PeriodicOrbit>& library,
                                 const std::vector<Crossing>& attractor);

// Shooting state from the crossings of an arc.
ShootingState seed_from_crossings(const std::vector<Crossing>& section);

// Image of a shooting state under (x, y, z) -> (-x, -y, z).
ShootingState mirror_state(const ShootingState& s);

// Phase-space samples of one period, every `stride` RK4 steps from the first section point.
std::vector<State3> orbit_samples(const PeriodicOrbit& orbit, const ClosureConfig& cfg, std::size_t stride = 1);

}  // namespace orbitforge

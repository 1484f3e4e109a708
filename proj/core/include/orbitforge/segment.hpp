#pragma once

// Sliding-window segmentation of a trajectory on its similarity signature
// curve, and extraction of nearly closed arcs (quasi-orbits).

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "orbitforge/signature.hpp"
#include "orbitforge/symbolic.hpp"

namespace orbitforge {

enum class DistanceMode { Signature, Phase };

struct WindowConfig {
  std::size_t window_size = 2500;
  // Window offsets below this are never taken as the argmin; offset 0 would
  // always win with distance 0.
  std::size_t refractory = 600;
  double dt = kDefaultDt;
  DistanceMode distance = DistanceMode::Signature;

  // Throws Error(InvalidArgument) unless 0 < refractory < window_size and dt > 0.
  void validate() const;
};

// Samples kept on each side of a segmentation point, used to measure how
// closely an arc returns to its start between samples.
inline constexpr std::size_t kNeighbourhood = 3;

struct SegmentationPoint {
  std::size_t index = 0;
  State3 state;
  SignaturePoint signature;
  int zdot_sign = 0;
  bool kept = false;
  // Samples index - kNeighbourhood .. index + kNeighbourhood, clamped at the
  // ends of the trajectory.
  std::array<State3, 2 * kNeighbourhood + 1> neighbourhood{};
};

struct QuasiOrbit {
  std::size_t start_idx = 0;
  std::size_t end_idx = 0;
  // Distance from the start state to the trajectory polyline through the
  // samples around end_idx.
  double gap = 0.0;
  // Distance between the start and end samples themselves.
  double sample_gap = 0.0;
  // Section crossings inside [start_idx, end_idx), in time order.
  std::vector<Crossing> section;

  std::size_t crossings() const noexcept { return section.size(); }
  SymbolSequence raw_word() const;
};

struct SegmentationResult {
  double t0 = 0.0;
  double dt = kDefaultDt;
  std::vector<SegmentationPoint> points;
  std::vector<SegmentationPoint> filtered_points;
  // gap of each quasi-orbit, in the order quasi_orbits produced them.
  std::vector<double> endpoint_gaps;
  // Every section crossing of the segmented trajectory.
  std::vector<Crossing> crossings;
};

// Trajectory index of the tau~ local maximum within the first window whose
// state is nearest the trajectory's first sample. Throws Error(NoExtremum).
// Chains started at a tau~ minimum can wander for hundreds of seconds before
// settling on a fixed phase of the loop; chains started at a maximum settle
// within a few windows.
std::size_t initial_point(const SignatureCurve& curve, const Trajectory& traj, std::size_t window_size = 2500);

// Offset in [refractory, window_size) of the window point closest to the
// window's first point, ties to the earliest. The window is curve positions
// pos .. pos + window_size - 1.
std::size_t window_argmin(const SignatureCurve& curve, const Trajectory& traj, std::size_t pos,
                          const WindowConfig& cfg);

// Segmentation points from the trajectory index `start` until fewer than
// window_size signature points remain. zdot_sign is filled from the field.
SegmentationResult slide(const SignatureCurve& curve, const Trajectory& traj, const WindowConfig& cfg,
                         std::size_t start, const LorenzParams& p);

// Keeps points whose zdot has the sign shared by most points (the first
// point's sign on a tie). Early points of a chain may sit on the other branch
// before it settles, so the first point alone is a poor judge.
SegmentationResult filter_z_direction(const SegmentationResult& result);

// Every pair i < j of filtered points whose arc crosses the section 1 to
// max_crossings times and closes to within gap_tol. Arcs without crossings
// carry no symbols and are skipped.
std::vector<QuasiOrbit> quasi_orbits(const SegmentationResult& result, double gap_tol,
                                     std::size_t max_crossings = 10);

// Signature, initial point, slide, filter and crossings for a stored trajectory.
SegmentationResult segment_trajectory(const Trajectory& traj, const LorenzParams& p, const WindowConfig& cfg,
                                      const SectionConfig& section, SignatureMethod method);

// Same result as segment_trajectory on the n_steps-step trajectory from
// `start`, but integrated and segmented chunk by chunk so only about
// window_size + chunk samples are held at once.
struct StreamConfig {
  LorenzParams params;
  WindowConfig window;
  SectionConfig section;
  SignatureMethod method = SignatureMethod::Analytic;
  std::size_t chunk = std::size_t{1} << 17;
};
SegmentationResult segment_stream(const State3& start, std::size_t n_steps, const StreamConfig& cfg, double t0 = 0.0);

// CSV "idx,t,x,y,z,kappa_tilde,kappa_tilde_s,tau_tilde,zdot_sign,kept", one row per point.
void write_segmentation_csv(std::ostream& out, const SegmentationResult& result);
std::vector<SegmentationPoint> read_segmentation_csv(std::istream& in);

// CSV "start_idx,end_idx,gap,crossings".
struct QuasiOrbitRow {
  std::size_t start_idx = 0;
  std::size_t end_idx = 0;
  double gap = 0.0;
  std::size_t crossings = 0;
};
void write_quasi_orbits_csv(std::ostream& out, const std::vector<QuasiOrbit>& arcs);
std::vector<QuasiOrbitRow> read_quasi_orbits_csv(std::istream& in);

}  // namespace orbitforge

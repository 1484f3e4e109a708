#pragma once

// Euclidean and similarity differential invariants of space curves, and the
// similarity signature curve (kappa~, kappa~_s~, tau~) of a sampled trajectory.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "orbitforge/integrate.hpp"

namespace orbitforge {

// Curvature, its arc-length derivative, and torsion.
struct EuclideanInvariants {
  double kappa = 0.0;
  double kappa_s = 0.0;
  double tau = 0.0;
};

struct SimilarityInvariants {
  double kappa_tilde = 0.0;
  double tau_tilde = 0.0;
};

// One point of the similarity signature curve. `index` is the trajectory
// sample the point belongs to; degenerate samples are absent, so indices may
// skip.
struct SignaturePoint {
  std::size_t index = 0;
  double s_tilde = 0.0;
  double kappa_tilde = 0.0;
  double kappa_tilde_s = 0.0;
  double tau_tilde = 0.0;
};

struct SignatureCurve {
  std::vector<SignaturePoint> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

// First three time derivatives of a parametrized curve at one sample.
struct CurveJet {
  State3 d1;
  State3 d2;
  State3 d3;
};

enum class SignatureMethod { Analytic, Discrete };

// |z_t ^ z_tt| / |z_t|^2 below this is treated as a straight-line point.
inline constexpr double kAnalyticDegeneracy = 1e-10;
// Triangles with smaller area are treated as collinear.
inline constexpr double kDiscreteAreaDegeneracy = 1e-14;

EuclideanInvariants analytic_euclidean(const State3& z_t, const State3& z_tt, const State3& z_ttt);

// (kappa_s / kappa^2, tau / kappa).
SimilarityInvariants similarity_from_euclidean(const EuclideanInvariants& e);

// Four-point estimate at `cur` from consecutive samples prev, cur, next, next2.
// kappa is 4 Delta / (abc) on (prev, cur, next); tau is 6 H / (d e f kappa)
// with H the height of the tetrahedron over the base (prev, cur, next), signed
// by the triple product of the consecutive edges.
EuclideanInvariants discrete_euclidean(const State3& prev, const State3& cur, const State3& next, const State3& next2);

// Exact jets of a Lorenz trajectory.
std::vector<CurveJet> lorenz_jets(const Trajectory& traj, const LorenzParams& p);

// Analytic signature from per-sample jets (jets.size() == traj.size()).
SignatureCurve signature_curve(const Trajectory& traj, std::span<const CurveJet> jets);

// Discrete four-point signature.
SignatureCurve signature_curve_discrete(const Trajectory& traj);

// Dispatches on method; the analytic route uses lorenz_jets.
SignatureCurve signature_curve(const Trajectory& traj, const LorenzParams& p, SignatureMethod method);

// z -> scale * rotation * z + translation.
struct SimilarityTransform {
  double scale = 1.0;
  Matrix3 rotation = Matrix3::identity();
  State3 translation{};

  // Throws Error(NonOrthogonal) unless rotation is orthogonal within 1e-12,
  // Error(InvalidArgument) unless scale > 0.
  void validate() const;
  State3 apply(const State3& z) const { return scale * (rotation * z) + translation; }
};

Trajectory apply_similarity(const Trajectory& traj, const SimilarityTransform& g);
// Jets transform linearly; translation drops out.
std::vector<CurveJet> apply_similarity(std::span<const CurveJet> jets, const SimilarityTransform& g);

// CSV with header "idx,s_tilde,kappa_tilde,kappa_tilde_s,tau_tilde".
void write_signature_csv(std::ostream& out, const SignatureCurve& curve);
SignatureCurve read_signature_csv(std::istream& in);

}  // namespace orbitforge

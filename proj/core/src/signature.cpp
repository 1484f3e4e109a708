#include "orbitforge/signature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "orbitforge/error.hpp"

namespace orbitforge {

EuclideanInvariants analytic_euclidean(const State3& z_t, const State3& z_tt, const State3& z_ttt) {
  const State3 w = cross(z_t, z_tt);
  const double nv = norm(z_t);
  const double nw = norm(w);
  if (!(nv > 0.0) || nw / (nv * nv) < kAnalyticDegeneracy)
    throw Error(ErrorCode::DegenerateCurvature, "z_t and z_tt are (nearly) parallel");

  EuclideanInvariants e;
  e.kappa = nw / (nv * nv * nv);
  e.tau = triple(z_t, z_tt, z_ttt) / (nw * nw);
  // Similarity curvature kappa_s / kappa^2 in closed form; scale back by kappa^2.
  const double kappa_tilde =
      (dot(cross(z_t, z_ttt), w) * nv * nv - 3.0 * dot(z_t, z_tt) * nw * nw) / (nw * nw * nw);
  e.kappa_s = kappa_tilde * e.kappa * e.kappa;
  return e;
}

SimilarityInvariants similarity_from_euclidean(const EuclideanInvariants& e) {
  if (!(e.kappa > 1e-300)) throw Error(ErrorCode::DegenerateCurvature, "curvature vanishes");
  return {e.kappa_s / (e.kappa * e.kappa), e.tau / e.kappa};
}

namespace {

// Heron's formula in Kahan's cancellation-free arrangement.
double triangle_area(double a, double b, double c) {
  double s[3] = {a, b, c};
  std::sort(s, s + 3, [](double u, double v) { return u > v; });
  const double x = s[0], y = s[1], z = s[2];
  const double prod = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return 0.25 * std::sqrt(std::max(0.0, prod));
}

// Circumcircle curvature of a triangle with the given sides; throws on collinear input.
double menger_curvature(double a, double b, double c) {
  const double area = triangle_area(a, b, c);
  if (!(a > 0.0 && b > 0.0 && c > 0.0) || area < kDiscreteAreaDegeneracy)
    throw Error(ErrorCode::DegenerateCurvature, "collinear or coincident sample triple");
  return 4.0 * area / (a * b * c);
}

}  // namespace

EuclideanInvariants discrete_euclidean(const State3& prev, const State3& cur, const State3& next,
                                       const State3& next2) {
  const double a = distance(prev, cur);
  const double b = distance(cur, next);
  const double c = distance(prev, next);
  const double d = distance(next, next2);
  const double e = distance(cur, next2);
  const double f = distance(prev, next2);

  const double area = triangle_area(a, b, c);
  EuclideanInvariants out;
  out.kappa = menger_curvature(a, b, c);
  const double kappa_next = menger_curvature(b, d, e);
  // Centres of the two stencils are one sample apart, so the arc between them
  // is a third of the three consecutive chords.
  out.kappa_s = 3.0 * (kappa_next - out.kappa) / (a + b + d);

  if (out.kappa < 1e-12 || !(d > 0.0 && e > 0.0 && f > 0.0))
    throw Error(ErrorCode::DegenerateTorsion, "torsion undefined at vanishing curvature");
  const double volume = triple(cur - prev, next - cur, next2 - next) / 6.0;
  const double height = 3.0 * volume / area;
  out.tau = 6.0 * height / (d * e * f * out.kappa);
  return out;
}

std::vector<CurveJet> lorenz_jets(const Trajectory& traj, const LorenzParams& p) {
  std::vector<CurveJet> jets;
  jets.reserve(traj.size());
  for (const State3& s : traj.samples) {
    const State3 v = rhs(s, p);
    const Matrix3 j = jacobian(s, p);
    const State3 a = j * v;
    jets.push_back({v, a, j * a + hessian_form(v)});
  }
  return jets;
}

namespace {

// Fills kappa_tilde_s by differencing kappa_tilde against s_tilde, centred in
// the interior and one-sided at the ends. inc[k] is the arc-length step from
// point k-1 to k; differencing uses these local steps rather than the running
// total, so a slice of a longer curve gets bit-identical derivatives.
void differentiate_against_arclength(std::vector<SignaturePoint>& pts, const std::vector<double>& inc) {
  const std::size_t n = pts.size();
  if (n < 2) return;
  auto slope = [&](std::size_t i, std::size_t j) {
    const double ds = j == i + 1 ? inc[j] : inc[i + 1] + inc[j];
    return ds > 0.0 ? (pts[j].kappa_tilde - pts[i].kappa_tilde) / ds : 0.0;
  };
  pts[0].kappa_tilde_s = slope(0, 1);
  for (std::size_t i = 1; i + 1 < n; ++i) pts[i].kappa_tilde_s = slope(i - 1, i + 1);
  pts[n - 1].kappa_tilde_s = slope(n - 2, n - 1);
}

}  // namespace

SignatureCurve signature_curve(const Trajectory& traj, std::span<const CurveJet> jets) {
  if (traj.size() < 5) throw Error(ErrorCode::InvalidArgument, "signature needs at least 5 samples");
  if (jets.size() != traj.size()) throw Error(ErrorCode::InvalidArgument, "one jet per sample required");

  SignatureCurve curve;
  curve.points.reserve(traj.size());
  std::vector<double> inc;
  double prev_rate = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const CurveJet& jet = jets[i];
    EuclideanInvariants e;
    try {
      e = analytic_euclidean(jet.d1, jet.d2, jet.d3);
    } catch (const Error&) {
      continue;
    }
    const SimilarityInvariants sim = similarity_from_euclidean(e);
    // d s~ / dt = kappa |z_t|
    const double rate = e.kappa * norm(jet.d1);
    SignaturePoint pt;
    pt.index = i;
    pt.kappa_tilde = sim.kappa_tilde;
    pt.tau_tilde = sim.tau_tilde;
    if (!curve.points.empty()) {
      const SignaturePoint& last = curve.points.back();
      inc.push_back(0.5 * (prev_rate + rate) * static_cast<double>(i - last.index) * traj.dt);
      pt.s_tilde = last.s_tilde + inc.back();
    } else {
      inc.push_back(0.0);
    }
    prev_rate = rate;
    curve.points.push_back(pt);
  }
  differentiate_against_arclength(curve.points, inc);
  return curve;
}

SignatureCurve signature_curve_discrete(const Trajectory& traj) {
  if (traj.size() < 5) throw Error(ErrorCode::InvalidArgument, "signature needs at least 5 samples");
  const auto& P = traj.samples;

  SignatureCurve curve;
  curve.points.reserve(traj.size());
  std::vector<double> inc;
  double prev_kappa = 0.0;
  for (std::size_t i = 1; i + 2 < P.size(); ++i) {
    EuclideanInvariants e;
    try {
      e = discrete_euclidean(P[i - 1], P[i], P[i + 1], P[i + 2]);
    } catch (const Error&) {
      continue;
    }
    const SimilarityInvariants sim = similarity_from_euclidean(e);
    SignaturePoint pt;
    pt.index = i;
    pt.kappa_tilde = sim.kappa_tilde;
    pt.tau_tilde = sim.tau_tilde;
    if (!curve.points.empty()) {
      const SignaturePoint& last = curve.points.back();
      inc.push_back(0.5 * (prev_kappa + e.kappa) * distance(P[last.index], P[i]));
      pt.s_tilde = last.s_tilde + inc.back();
    } else {
      inc.push_back(0.0);
    }
    prev_kappa = e.kappa;
    curve.points.push_back(pt);
  }
  differentiate_against_arclength(curve.points, inc);
  return curve;
}

SignatureCurve signature_curve(const Trajectory& traj, const LorenzParams& p, SignatureMethod method) {
  if (method == SignatureMethod::Discrete) return signature_curve_discrete(traj);
  const auto jets = lorenz_jets(traj, p);
  return signature_curve(traj, jets);
}

void SimilarityTransform::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
  const Matrix3 g = transpose(rotation) * rotation;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (std::fabs(g(i, j) - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw Error(ErrorCode::NonOrthogonal, "rotation is not orthogonal within 1e-12");
}

Trajectory apply_similarity(const Trajectory& traj, const SimilarityTransform& g) {
  g.validate();
  Trajectory out = traj;
  for (State3& s : out.samples) s = g.apply(s);
  return out;
}

std::vector<CurveJet> apply_similarity(std::span<const CurveJet> jets, const SimilarityTransform& g) {
  g.validate();
  std::vector<CurveJet> out;
  out.reserve(jets.size());
  for (const CurveJet& j : jets)
    out.push_back({g.scale * (g.rotation * j.d1), g.scale * (g.rotation * j.d2), g.scale * (g.rotation * j.d3)});
  return out;
}

void write_signature_csv(std::ostream& out, const SignatureCurve& curve) {
  out << "idx,s_tilde,kappa_tilde,kappa_tilde_s,tau_tilde\n";
  char buf[160];
  for (const SignaturePoint& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", p.index, p.s_tilde, p.kappa_tilde,
                  p.kappa_tilde_s, p.tau_tilde);
    out << buf;
  }
}

SignatureCurve read_signature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("idx,s_tilde,kappa_tilde,kappa_tilde_s,tau_tilde", 0) != 0)
    throw Error(ErrorCode::IoError, "signature CSV header mismatch");
  SignatureCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SignaturePoint p;
    if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%lf", &p.index, &p.s_tilde, &p.kappa_tilde, &p.kappa_tilde_s,
                    &p.tau_tilde) != 5)
      throw Error(ErrorCode::IoError, "malformed signature row: " + line);
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace orbitforge

#include "orbitforge/segment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace orbitforge {

void WindowConfig::validate() const {
  if (!(refractory > 0 && refractory < window_size))
    throw Error(ErrorCode::InvalidArgument, "window needs 0 < refractory < window_size");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
}

SymbolSequence QuasiOrbit::raw_word() const {
  SymbolSequence seq;
  for (const Crossing& c : section) seq.word.push_back(c.label);
  return seq;
}

namespace {

double squared(double v) { return v * v; }

double signature_distance2(const SignaturePoint& a, const SignaturePoint& b) {
  return squared(a.kappa_tilde - b.kappa_tilde) + squared(a.kappa_tilde_s - b.kappa_tilde_s) +
         squared(a.tau_tilde - b.tau_tilde);
}

double phase_distance2(const State3& a, const State3& b) {
  const State3 d = a - b;
  return dot(d, d);
}

std::size_t position_of(const SignatureCurve& curve, std::size_t index) {
  const auto it = std::lower_bound(curve.points.begin(), curve.points.end(), index,
                                   [](const SignaturePoint& p, std::size_t i) { return p.index < i; });
  return static_cast<std::size_t>(it - curve.points.begin());
}

// offset maps local trajectory indices to global ones.
SegmentationPoint make_point(const SignatureCurve& curve, std::size_t pos, const Trajectory& traj,
                             std::size_t offset, const LorenzParams& p) {
  const SignaturePoint& sp = curve.points[pos];
  SegmentationPoint out;
  out.index = sp.index + offset;
  out.state = traj.samples[sp.index];
  out.signature = sp;
  out.signature.index = out.index;
  const double zdot = rhs(out.state, p).z;
  out.zdot_sign = (zdot > 0.0) - (zdot < 0.0);
  const std::size_t last = traj.size() - 1;
  for (std::size_t k = 0; k < out.neighbourhood.size(); ++k) {
    const std::size_t i = sp.index + k < kNeighbourhood ? 0 : std::min(last, sp.index + k - kNeighbourhood);
    out.neighbourhood[k] = traj.samples[i];
  }
  return out;
}

double point_segment_distance(const State3& q, const State3& a, const State3& b) {
  const State3 d = b - a;
  const double dd = dot(d, d);
  if (dd == 0.0) return distance(q, a);
  const double s = std::clamp(dot(q - a, d) / dd, 0.0, 1.0);
  return distance(q, a + s * d);
}

}  // namespace

std::size_t initial_point(const SignatureCurve& curve, const Trajectory& traj, std::size_t window_size) {
  if (curve.empty() || traj.size() == 0) throw Error(ErrorCode::NoExtremum, "empty signature curve");
  const std::size_t n = std::min(window_size, curve.size());
  const State3 origin = traj.samples.front();
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double left = curve.points[i].tau_tilde - curve.points[i - 1].tau_tilde;
    const double right = curve.points[i + 1].tau_tilde - curve.points[i].tau_tilde;
    if (!(left > 0.0 && right < 0.0)) continue;
    const double d = distance(traj.samples[curve.points[i].index], origin);
    if (d < best_d) {
      best_d = d;
      best = curve.points[i].index;
    }
  }
  if (!std::isfinite(best_d)) throw Error(ErrorCode::NoExtremum, "no tau~ local maximum in the first window");
  return best;
}

std::size_t window_argmin(const SignatureCurve& curve, const Trajectory& traj, std::size_t pos,
                          const WindowConfig& cfg) {
  const auto& pts = curve.points;
  std::size_t best = cfg.refractory;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = cfg.refractory; j < cfg.window_size; ++j) {
    const double d = cfg.distance == DistanceMode::Signature
                         ? signature_distance2(pts[pos], pts[pos + j])
                         : phase_distance2(traj.samples[pts[pos].index], traj.samples[pts[pos + j].index]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

SegmentationResult slide(const SignatureCurve& curve, const Trajectory& traj, const WindowConfig& cfg,
                         std::size_t start, const LorenzParams& p) {
  cfg.validate();
  SegmentationResult r;
  r.t0 = traj.t0;
  r.dt = traj.dt;
  std::size_t pos = position_of(curve, start);
  const std::size_t n = curve.size();
  if (pos >= n) return r;
  r.points.push_back(make_point(curve, pos, traj, 0, p));
  while (pos + cfg.window_size <= n) {
    pos += window_argmin(curve, traj, pos, cfg);
    r.points.push_back(make_point(curve, pos, traj, 0, p));
  }
  return r;
}

SegmentationResult filter_z_direction(const SegmentationResult& result) {
  SegmentationResult r = result;
  r.filtered_points.clear();
  if (r.points.empty()) return r;
  // Majority direction; the first point decides a tie.
  long balance = 0;
  for (const SegmentationPoint& pt : r.points) balance += pt.zdot_sign;
  const int sign = balance > 0 ? 1 : balance < 0 ? -1 : r.points.front().zdot_sign;
  for (SegmentationPoint& pt : r.points) {
    pt.kept = pt.zdot_sign == sign;
    if (pt.kept) r.filtered_points.push_back(pt);
  }
  return r;
}

std::vector<QuasiOrbit> quasi_orbits(const SegmentationResult& result, double gap_tol, std::size_t max_crossings) {
  const auto& f = result.filtered_points;
  const auto& cs = result.crossings;
  auto first_at = [&](std::size_t sample) {
    return std::lower_bound(cs.begin(), cs.end(), sample,
                            [](const Crossing& c, std::size_t s) { return c.sample < s; });
  };
  std::vector<QuasiOrbit> out;
  for (std::size_t a = 0; a < f.size(); ++a) {
    const auto lo = first_at(f[a].index);
    for (std::size_t b = a + 1; b < f.size(); ++b) {
      const auto hi = first_at(f[b].index);
      const auto count = static_cast<std::size_t>(hi - lo);
      if (count > max_crossings) break;
      if (count == 0) continue;
      double gap = std::numeric_limits<double>::infinity();
      const auto& nb = f[b].neighbourhood;
      for (std::size_t k = 0; k + 1 < nb.size(); ++k)
        gap = std::min(gap, point_segment_distance(f[a].state, nb[k], nb[k + 1]));
      if (!(gap <= gap_tol)) continue;
      QuasiOrbit q;
      q.start_idx = f[a].index;
      q.end_idx = f[b].index;
      q.gap = gap;
      q.sample_gap = distance(f[a].state, f[b].state);
      q.section.assign(lo, hi);
      out.push_back(std::move(q));
    }
  }
  return out;
}

SegmentationResult segment_trajectory(const Trajectory& traj, const LorenzParams& p, const WindowConfig& cfg,
                                      const SectionConfig& section, SignatureMethod method) {
  cfg.validate();
  const SignatureCurve curve = signature_curve(traj, p, method);
  const std::size_t start = initial_point(curve, traj, cfg.window_size);
  SegmentationResult r = filter_z_direction(slide(curve, traj, cfg, start, p));
  r.crossings = crossings(traj, p, section);
  return r;
}

SegmentationResult segment_stream(const State3& start, std::size_t n_steps, const StreamConfig& cfg, double t0) {
  const WindowConfig& win = cfg.window;
  win.validate();
  cfg.section.validate();
  cfg.params.validate();
  const std::size_t total = n_steps + 1;
  const std::size_t chunk = std::max(cfg.chunk, 2 * win.window_size);

  SegmentationResult r;
  r.t0 = t0;
  r.dt = win.dt;

  Trajectory buf;
  buf.t0 = t0;
  buf.dt = win.dt;
  buf.samples.push_back(start);
  std::size_t base = 0;

  auto extend = [&] {
    const std::size_t want = std::min(chunk, total - (base + buf.size()));
    State3 s = buf.samples.back();
    for (std::size_t i = 0; i < want; ++i) {
      const std::size_t k = base + buf.size() - 1;
      const State3 next = rk4_step(s, cfg.params, win.dt);
      if (!std::isfinite(next.x) || !std::isfinite(next.y) || !std::isfinite(next.z) ||
          max_abs(next) > kDivergenceBound)
        throw Error(ErrorCode::Divergence, "state left the finite domain at step " + std::to_string(k + 1));
      if (cfg.section.brackets(s, next))
        r.crossings.push_back(refine_crossing(s, t0 + static_cast<double>(k) * win.dt, win.dt, cfg.params,
                                              cfg.section, k));
      buf.samples.push_back(next);
      s = next;
    }
  };

  extend();
  SignatureCurve curve = signature_curve(buf, cfg.params, cfg.method);
  std::size_t s = initial_point(curve, buf, win.window_size);
  std::size_t pos = position_of(curve, s);
  r.points.push_back(make_point(curve, pos, buf, base, cfg.params));

  for (;;) {
    const bool finished = base + buf.size() == total;
    const std::size_t n = curve.size();
    pos = position_of(curve, s - base);
    // Away from the end of the stream the last signature point and the last
    // few samples are still provisional.
    const bool fits = finished ? pos + win.window_size <= n
                               : pos + win.window_size + 1 <= n &&
                                     curve.points[pos + win.window_size - 1].index + kNeighbourhood + 1 < buf.size();
    if (fits) {
      pos += window_argmin(curve, buf, pos, win);
      s = curve.points[pos].index + base;
      r.points.push_back(make_point(curve, pos, buf, base, cfg.params));
      continue;
    }
    if (finished) break;
    const std::size_t keep_from = std::max(base, s >= kNeighbourhood ? s - kNeighbourhood : 0);
    buf.samples.erase(buf.samples.begin(), buf.samples.begin() + static_cast<std::ptrdiff_t>(keep_from - base));
    base = keep_from;
    buf.t0 = t0 + static_cast<double>(base) * win.dt;
    extend();
    curve = signature_curve(buf, cfg.params, cfg.method);
  }

  std::vector<Crossing> cs = std::move(r.crossings);
  r = filter_z_direction(r);
  r.crossings = std::move(cs);
  return r;
}

void write_segmentation_csv(std::ostream& out, const SegmentationResult& result) {
  out << "idx,t,x,y,z,kappa_tilde,kappa_tilde_s,tau_tilde,zdot_sign,kept\n";
  char buf[320];
  for (const SegmentationPoint& p : result.points) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n", p.index,
                  result.t0 + static_cast<double>(p.index) * result.dt, p.state.x, p.state.y, p.state.z,
                  p.signature.kappa_tilde, p.signature.kappa_tilde_s, p.signature.tau_tilde, p.zdot_sign,
                  p.kept ? 1 : 0);
    out << buf;
  }
}

std::vector<SegmentationPoint> read_segmentation_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("idx,t,x,y,z,kappa_tilde,kappa_tilde_s,tau_tilde,zdot_sign,kept", 0) != 0)
    throw Error(ErrorCode::IoError, "segmentation CSV header mismatch");
  std::vector<SegmentationPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SegmentationPoint p;
    double t = 0.0;
    int kept = 0;
    if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%d,%d", &p.index, &t, &p.state.x, &p.state.y,
                    &p.state.z, &p.signature.kappa_tilde, &p.signature.kappa_tilde_s, &p.signature.tau_tilde,
                    &p.zdot_sign, &kept) != 10)
      throw Error(ErrorCode::IoError, "malformed segmentation row: " + line);
    p.signature.index = p.index;
    p.kept = kept != 0;
    out.push_back(p);
  }
  return out;
}

void write_quasi_orbits_csv(std::ostream& out, const std::vector<QuasiOrbit>& arcs) {
  out << "start_idx,end_idx,gap,crossings\n";
  char buf[128];
  for (const QuasiOrbit& q : arcs) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%zu\n", q.start_idx, q.end_idx, q.gap, q.crossings());
    out << buf;
  }
}

std::vector<QuasiOrbitRow> read_quasi_orbits_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("start_idx,end_idx,gap,crossings", 0) != 0)
    throw Error(ErrorCode::IoError, "quasi-orbit CSV header mismatch");
  std::vector<QuasiOrbitRow> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    QuasiOrbitRow q;
    if (std::sscanf(line.c_str(), "%zu,%zu,%lf,%zu", &q.start_idx, &q.end_idx, &q.gap, &q.crossings) != 4)
      throw Error(ErrorCode::IoError, "malformed quasi-orbit row: " + line);
    out.push_back(q);
  }
  return out;
}

}  // namespace orbitforge

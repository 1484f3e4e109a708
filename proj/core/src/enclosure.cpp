#include "orbitforge/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace orbitforge {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Upper bound of the infinity norm of an interval matrix.
double norm_inf_upper(const IMat3& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < 3; ++i) best = std::max(best, m(i, 0).mag() + m(i, 1).mag() + m(i, 2).mag());
  return best * (1.0 + 8.0 * kEps);
}

// Interval matrix holding Q^{-1} for a numerically orthogonal Q. With
// E = Q^T Q - I, Q^{-1} = (I + E)^{-1} Q^T differs from Q^T by at most
// ||E|| / (1 - ||E||) ||Q^T|| in every entry.
IMat3 inverse_enclosure(const Matrix3& q) {
  const IMat3 qi = to_interval<Interval>(q);
  const IMat3 qt = transpose(qi);
  const IMat3 e = qt * qi - IMat3::identity();
  const double en = norm_inf_upper(e);
  if (!(en < 0.5)) throw Error(ErrorCode::EnclosureBlowup, "enclosure frame lost orthogonality");
  const double bound = en / (1.0 - en) * norm_inf_upper(qt) * (1.0 + 1e-10);
  IMat3 out = qt;
  for (Interval& x : out.a) x = x + Interval::symmetric(bound);
  return out;
}

// QR frame for the image of the current frame. Columns are ordered by how
// far the set extends along them so the widest direction is kept exactly.
Matrix3 next_frame(const Matrix3& image_of_frame, const IVec3& remainder) {
  std::array<std::size_t, 3> order{0, 1, 2};
  std::array<double, 3> extent{};
  for (std::size_t j = 0; j < 3; ++j) extent[j] = norm(image_of_frame.column(j)) * remainder[j].rad();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return extent[a] > extent[b]; });
  Eigen::Matrix3d m;
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 3; ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = image_of_frame(i, order[j]);
  const Eigen::Matrix3d q = Eigen::HouseholderQR<Eigen::Matrix3d>(m).householderQ();
  Matrix3 out;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out(i, j) = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

// New set for image + jmap (A r): recentred, reframed, remainder re-expressed.
LohnerSet lohner_update(const LohnerSet& s, const IVec3& image, const IMat3& jmap) {
  LohnerSet out;
  out.center = midpoint(image);
  const IMat3 ja = jmap * to_interval<Interval>(s.frame);
  out.frame = next_frame(midpoint(ja), s.remainder);
  const IMat3 inv = inverse_enclosure(out.frame);
  out.remainder = (inv * ja) * s.remainder + inv * (image - to_interval<Interval>(out.center));
  return out;
}

IVec3 symmetric_box(const State3& e) {
  return {Interval::symmetric(e.x), Interval::symmetric(e.y), Interval::symmetric(e.z)};
}

// Local error bound from comparing one step with two half steps, inflated by
// `safety`, plus a few ulps of the value.
State3 defect(const State3& full, const State3& halves, double safety) {
  State3 e;
  for (std::size_t i = 0; i < 3; ++i)
    e[i] = safety * (16.0 / 15.0) * std::fabs(full[i] - halves[i]) + 8.0 * kEps * std::max(1.0, std::fabs(full[i]));
  return e;
}

class Propagator {
 public:
  Propagator(const LorenzParams& p, const LohnerSet& state, std::size_t n_columns, double safety, double blowup)
      : p_(p), state_(state), safety_(safety), blowup_(blowup) {
    for (std::size_t j = 0; j < n_columns; ++j) {
      LohnerSet c;
      c.center = {j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0, j == 2 ? 1.0 : 0.0};
      columns_.push_back(c);
    }
  }

  void advance(double h) {
    const IVec3 hull = state_.hull();
    const IMat3 jmap = rk4_step_jacobian(hull, p_, h);
    const State3 c = state_.center;
    const State3 half = rk4_step(c, p_, 0.5 * h);
    const IVec3 image = rk4_step(to_interval<Interval>(c), p_, h) +
                        symmetric_box(defect(rk4_step(c, p_, h), rk4_step(half, p_, 0.5 * h), safety_));
    if (!columns_.empty()) {
      const Matrix3 full_j = rk4_step_jacobian(c, p_, h);
      const Matrix3 halves_j = rk4_step_jacobian(half, p_, 0.5 * h) * rk4_step_jacobian(c, p_, 0.5 * h);
      for (LohnerSet& col : columns_) {
        const IVec3 img = jmap * to_interval<Interval>(col.center) +
                          symmetric_box(defect(full_j * col.center, halves_j * col.center, safety_));
        col = lohner_update(col, img, jmap);
      }
    }
    state_ = lohner_update(state_, image, jmap);
    const IVec3 next = state_.hull();
    if (!(max_width(next) <= blowup_))
      throw Error(ErrorCode::EnclosureBlowup, "enclosure wider than " + std::to_string(blowup_));
  }

  const LohnerSet& state() const { return state_; }
  IVec3 column_hull(std::size_t j) const { return columns_[j].hull(); }
  std::size_t columns() const { return columns_.size(); }

 private:
  LorenzParams p_;
  LohnerSet state_;
  std::vector<LohnerSet> columns_;
  double safety_;
  double blowup_;
};

IVec3 inflate(const IVec3& b) {
  IVec3 out;
  for (std::size_t i = 0; i < 3; ++i) out[i] = b[i] + Interval::symmetric(0.1 * b[i].width() + 1e-12);
  return out;
}

bool subset(const IVec3& a, const IVec3& b) {
  return a.x.subset_of(b.x) && a.y.subset_of(b.y) && a.z.subset_of(b.z);
}

}  // namespace

IVec3 LohnerSet::hull() const { return to_interval<Interval>(center) + to_interval<Interval>(frame) * remainder; }

FlowEnclosure interval_flow(const IVec3& box, double t, const EnclosureConfig& cfg) {
  cfg.params.validate();
  LohnerSet s;
  s.center = midpoint(box);
  s.remainder = box - to_interval<Interval>(s.center);
  Propagator prop(cfg.params, s, 3, cfg.defect_safety, cfg.blowup_width);
  const StepPlan plan = plan_steps(t, cfg.dt);
  for (std::size_t k = 0; k < plan.whole_steps; ++k) prop.advance(cfg.dt);
  if (plan.remainder > 0.0) prop.advance(plan.remainder);
  FlowEnclosure out;
  out.state = prop.state().hull();
  for (std::size_t j = 0; j < 3; ++j) out.monodromy.set_column(j, prop.column_hull(j));
  return out;
}

PoincareEnclosure interval_poincare(const std::array<Interval, 2>& box, const ClosureConfig& cfg, bool with_derivative,
                                    double defect_safety) {
  const LorenzParams& p = cfg.params;
  const SectionConfig& sec = cfg.section;
  const SectionPoint mid{box[0].mid(), box[1].mid()};
  const PoincareResult ref = poincare_map(mid, cfg);
  const double t_hat = ref.return_time;
  const double zdot_hat = std::fabs(rhs(ref.state, p).z);

  LohnerSet s0;
  s0.center = lift(mid, sec);
  s0.remainder = {box[0] - mid[0], box[1] - mid[1], Interval(0.0)};
  Propagator prop(p, s0, with_derivative ? 2 : 0, defect_safety, 1.0);

  auto side = [&](const IVec3& h) { return sec.direction * (h.z - sec.plane_z); };
  bool departed = false;
  auto check_side = [&] {
    const Interval sd = side(prop.state().hull());
    if (departed) {
      if (!(sd.hi() < 0.0)) throw Error(ErrorCode::CrossingNotIsolated, "enclosure touches the section early");
    } else if (sd.hi() < 0.0) {
      departed = true;
    }
  };

  // Full steps on the reference grid until one margin short of the midpoint
  // crossing, then a partial step onto that time.
  std::size_t k = 0;
  double t_stop = 0.0;
  for (;;) {
    const double margin = 4.0 * max_width(prop.state().hull()) / zdot_hat + 1e-10;
    const double target = t_hat - margin;
    const double t_k = static_cast<double>(k) * cfg.dt;
    if (t_k + cfg.dt <= target) {
      prop.advance(cfg.dt);
      ++k;
      check_side();
      continue;
    }
    t_stop = t_k;
    if (target > t_k) {
      prop.advance(target - t_k);
      check_side();
      t_stop = target;
    }
    break;
  }
  if (!departed) throw Error(ErrorCode::CrossingNotIsolated, "enclosure never separates from the section");

  // A-priori enclosure of every orbit from the set over [0, s_max].
  const double s_hat = t_hat - t_stop;
  const double s_max = 2.0 * s_hat;
  const IVec3 hull = prop.state().hull();
  const Interval span(0.0, s_max);
  IVec3 b = inflate(hull + span * rhs(hull, p));
  bool valid = false;
  for (int it = 0; it < 20 && !valid; ++it) {
    const IVec3 next = hull + span * rhs(b, p);
    if (subset(next, b)) {
      b = next;
      valid = true;
    } else {
      b = inflate(next);
    }
  }
  if (!valid) throw Error(ErrorCode::CrossingNotIsolated, "no a-priori enclosure for the final approach");
  const IVec3 fb = rhs(b, p);
  if (!((sec.direction * fb.z).lo() > 0.0))
    throw Error(ErrorCode::CrossingNotIsolated, "zdot is not sign-definite near the crossing");
  if (!(side(hull + Interval(s_max) * fb).lo() > 0.0))
    throw Error(ErrorCode::CrossingNotIsolated, "part of the box has not crossed by the end of the approach");

  prop.advance(s_hat);
  const LohnerSet& sp = prop.state();
  const IMat3 a = to_interval<Interval>(sp.frame);
  const IVec3 ar = a * sp.remainder;
  const Interval dz = Interval(sec.plane_z) - Interval(sp.center.z);
  const Interval delta = (dz - ar.z) / fb.z;
  const Interval s_star = s_hat + delta;
  if (!(s_star.lo() >= 0.0 && s_star.hi() <= s_max))
    throw Error(ErrorCode::CrossingNotIsolated, "crossing time leaves the a-priori interval");

  // Crossing point: c' + A r + delta f, with delta and A r kept correlated
  // through g = f / f_z.
  const std::array<Interval, 2> g{fb.x / fb.z, fb.y / fb.z};
  PoincareEnclosure out;
  for (std::size_t i = 0; i < 2; ++i) {
    Interval v = Interval(sp.center[i]) + dz * g[i];
    for (std::size_t j = 0; j < 3; ++j) v = v + (a(i, j) - g[i] * a(2, j)) * sp.remainder[j];
    out.image[i] = v;
  }
  out.return_time = Interval(t_stop) + Interval(s_hat) + delta;

  if (with_derivative) {
    // D phi over the remaining time delta: I + delta Df(B) W, with W bounding
    // D phi_u for |u| <= |delta| through exp(|delta| L) - 1.
    const IMat3 jb = jacobian(b, p);
    const double growth = std::expm1(delta.mag() * norm_inf_upper(jb)) * (1.0 + 1e-10) + 4.0 * kEps;
    IMat3 w = IMat3::identity();
    for (Interval& x : w.a) x = x + Interval::symmetric(growth);
    const IMat3 d_delta = IMat3::identity() + delta * (jb * w);
    IMat3 m;
    m.set_column(0, prop.column_hull(0));
    m.set_column(1, prop.column_hull(1));
    const IMat3 full = d_delta * m;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) out.derivative[2 * i + j] = full(i, j) - g[i] * full(2, j);
  }
  return out;
}

}  // namespace orbitforge

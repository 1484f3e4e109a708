#include "orbitforge/closure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <string>
#include <utility>

namespace orbitforge {

namespace {

PoincareResult first_return(const SectionPoint& q, const ClosureConfig& cfg, bool with_derivative) {
  const LorenzParams& p = cfg.params;
  const std::size_t max_steps = static_cast<std::size_t>(std::ceil(cfg.max_flight / cfg.dt));
  State3 s = lift(q, cfg.section);
  Matrix3 m = Matrix3::identity();
  for (std::size_t k = 0; k < max_steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const State3 next = rk4_step(s, p, cfg.dt);
    if (!std::isfinite(next.x) || !std::isfinite(next.y) || !std::isfinite(next.z) || max_abs(next) > kDivergenceBound)
      throw Error(ErrorCode::Divergence, "return map left the finite domain");
    if (cfg.section.brackets(s, next)) {
      const Crossing c = refine_crossing(s, t, cfg.dt, p, cfg.section, k);
      PoincareResult out;
      out.point = {c.point.x, c.point.y};
      out.state = c.point;
      out.return_time = c.t;
      if (with_derivative) {
        const Matrix3 mh = rk4_step_jacobian(s, p, c.t - t) * m;
        // Project out the change in hitting time: D = (I - f e_z^T / f_z) M.
        const State3 f = rhs(c.point, p);
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t j = 0; j < 2; ++j)
            out.derivative(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                mh(i, j) - f[i] * mh(2, j) / f.z;
      }
      return out;
    }
    if (with_derivative) m = rk4_step_jacobian(s, p, cfg.dt) * m;
    s = next;
  }
  throw Error(ErrorCode::NoReturn, "no return to the section within " + std::to_string(cfg.max_flight));
}

ShootingEvaluation evaluate(const ShootingState& s, const ClosureConfig& cfg, bool with_jacobian) {
  const std::size_t p = s.period();
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "empty shooting state");
  const auto n = static_cast<Eigen::Index>(2 * p);
  ShootingEvaluation ev;
  ev.residual = Eigen::VectorXd::Zero(n);
  if (with_jacobian) ev.jacobian = Eigen::MatrixXd::Zero(n, n);
  ev.maps.reserve(p);
  for (std::size_t k = 0; k < p; ++k) {
    ev.maps.push_back(first_return(s.points[k], cfg, with_jacobian));
    const std::size_t next = (k + 1) % p;
    const auto rk = static_cast<Eigen::Index>(2 * k);
    const auto rn = static_cast<Eigen::Index>(2 * next);
    ev.residual(rk) = s.points[next][0] - ev.maps[k].point[0];
    ev.residual(rk + 1) = s.points[next][1] - ev.maps[k].point[1];
    if (with_jacobian) {
      ev.jacobian.block<2, 2>(rk, rk) -= ev.maps[k].derivative;
      ev.jacobian.block<2, 2>(rk, rn) += Eigen::Matrix2d::Identity();
    }
  }
  return ev;
}

ShootingState step(const ShootingState& s, const Eigen::VectorXd& delta, double lambda) {
  ShootingState out = s;
  for (std::size_t k = 0; k < s.period(); ++k) {
    out.points[k][0] += lambda * delta(static_cast<Eigen::Index>(2 * k));
    out.points[k][1] += lambda * delta(static_cast<Eigen::Index>(2 * k + 1));
  }
  return out;
}

}  // namespace

PoincareResult poincare_map(const SectionPoint& q, const ClosureConfig& cfg) { return first_return(q, cfg, true); }

ShootingEvaluation shooting_residual(const ShootingState& s, const ClosureConfig& cfg) {
  return evaluate(s, cfg, true);
}

SymbolSequence orbit_labels(const ShootingState& s, const SectionConfig& cfg) {
  SymbolSequence seq;
  for (const SectionPoint& q : s.points) seq.word.push_back(crossing_label(lift(q, cfg)));
  return seq;
}

PeriodicOrbit newton_close(const ShootingState& initial, const ClosureConfig& cfg,
                           const std::optional<SymbolSequence>& expected) {
  ShootingState z = initial;
  ShootingEvaluation ev = evaluate(z, cfg, true);
  int it = 0;
  while (!(ev.max_residual() < cfg.newton_tol)) {
    if (it >= cfg.max_iter)
      throw Error(ErrorCode::NoConvergence, "Newton did not converge in " + std::to_string(cfg.max_iter) +
                                                " iterations (residual " + std::to_string(ev.max_residual()) + ")");
    const Eigen::VectorXd delta = ev.jacobian.partialPivLu().solve(-ev.residual);
    if (!delta.allFinite()) throw Error(ErrorCode::NoConvergence, "singular shooting Jacobian");
    bool accepted = false;
    double lambda = 1.0;
    for (int h = 0; h <= cfg.max_halvings && !accepted; ++h, lambda *= 0.5) {
      const ShootingState trial = step(z, delta, lambda);
      ShootingEvaluation tev;
      try {
        tev = evaluate(trial, cfg, true);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::NoReturn || e.code() == ErrorCode::TangentialCrossing ||
            e.code() == ErrorCode::Divergence)
          continue;
        throw;
      }
      if (tev.max_residual() < ev.max_residual() || h == cfg.max_halvings) {
        z = trial;
        ev = std::move(tev);
        accepted = true;
      }
    }
    if (!accepted) throw Error(ErrorCode::NoConvergence, "every damped Newton step left the section");
    ++it;
  }

  PeriodicOrbit orbit;
  orbit.shooting = z;
  orbit.shooting.return_times.clear();
  for (const PoincareResult& m : ev.maps) {
    if (!(m.return_time > cfg.min_return && m.return_time < cfg.max_return))
      throw Error(ErrorCode::NoConvergence, "return time " + std::to_string(m.return_time) + " outside (" +
                                                std::to_string(cfg.min_return) + ", " +
                                                std::to_string(cfg.max_return) + ")");
    orbit.shooting.return_times.push_back(m.return_time);
    orbit.T += m.return_time;
  }
  const SymbolSequence raw = orbit_labels(z, cfg.section);
  orbit.sequence = canonicalize(raw.word);
  if (orbit.sequence.period() != z.period())
    throw Error(ErrorCode::LabelMismatch, "converged to a multiple cover of " + orbit.sequence.word);
  if (expected && canonicalize(expected->word) != orbit.sequence)
    throw Error(ErrorCode::LabelMismatch, "expected " + expected->word + ", converged to " + orbit.sequence.word);
  orbit.residual = ev.max_residual();
  orbit.iterations = it;
  return orbit;
}

ShootingState seed_from_crossings(const std::vector<Crossing>& section) {
  ShootingState s;
  for (std::size_t k = 0; k < section.size(); ++k) {
    s.points.push_back({section[k].point.x, section[k].point.y});
    s.return_times.push_back(k + 1 < section.size() ? section[k + 1].t - section[k].t : 0.0);
  }
  return s;
}

ShootingState mirror_state(const ShootingState& s) {
  ShootingState out = s;
  for (SectionPoint& q : out.points) q = {-q[0], -q[1]};
  return out;
}

std::vector<ShootingState> seed_candidates(const SymbolSequence& seq, const std::vector<PeriodicOrbit>& library,
                                           const std::vector<Crossing>& attractor, std::size_t max_seeds) {
  const SymbolSequence target = canonicalize(seq.word);
  std::vector<ShootingState> out;
  for (const PeriodicOrbit& o : library)
    if (o.sequence == target && out.size() < max_seeds) out.push_back(o.shooting);

  const std::size_t p = target.period();
  const std::size_t n = attractor.size();
  if (n <= p) return out;

  std::set<std::string> direct, mirrored;
  const std::string flipped = mirror(target).word;
  for (std::size_t k = 0; k < p; ++k) {
    direct.insert(target.word.substr(k) + target.word.substr(0, k));
    mirrored.insert(flipped.substr(k) + flipped.substr(0, k));
  }
  std::string labels;
  labels.reserve(n);
  for (const Crossing& c : attractor) labels.push_back(c.label);

  // (closing distance, start, mirrored)
  std::vector<std::tuple<double, std::size_t, bool>> blocks;
  for (std::size_t k = 0; k + p < n; ++k) {
    const std::string block = labels.substr(k, p);
    const bool is_direct = direct.count(block) > 0;
    if (!is_direct && mirrored.count(block) == 0) continue;
    const double gap = std::hypot(attractor[k + p].point.x - attractor[k].point.x,
                                  attractor[k + p].point.y - attractor[k].point.y);
    blocks.emplace_back(gap, k, !is_direct);
  }
  std::sort(blocks.begin(), blocks.end());
  for (const auto& [gap, k, flip] : blocks) {
    if (out.size() >= max_seeds) break;
    const std::vector<Crossing> block(attractor.begin() + static_cast<std::ptrdiff_t>(k),
                                      attractor.begin() + static_cast<std::ptrdiff_t>(k + p + 1));
    ShootingState s = seed_from_crossings(block);
    s.points.pop_back();
    s.return_times.pop_back();
    out.push_back(flip ? mirror_state(s) : s);
  }
  return out;
}

ShootingState seed_from_sequence(const SymbolSequence& seq, const std::vector<PeriodicOrbit>& library,
                                 const std::vector<Crossing>& attractor) {
  auto seeds = seed_candidates(seq, library, attractor, 1);
  if (seeds.empty()) throw Error(ErrorCode::SeedUnavailable, "no library orbit or attractor crossings spell " + seq.word);
  return std::move(seeds.front());
}

std::vector<State3> orbit_samples(const PeriodicOrbit& orbit, const ClosureConfig& cfg, std::size_t stride) {
  if (orbit.shooting.points.empty()) return {};
  stride = std::max<std::size_t>(stride, 1);
  const StepPlan plan = plan_steps(orbit.T, cfg.dt);
  std::vector<State3> out;
  State3 s = lift(orbit.shooting.points.front(), cfg.section);
  out.push_back(s);
  for (std::size_t k = 1; k <= plan.whole_steps; ++k) {
    s = rk4_step(s, cfg.params, cfg.dt);
    if (k % stride == 0) out.push_back(s);
  }
  if (plan.remainder > 0.0) out.push_back(rk4_step(s, cfg.params, plan.remainder));
  return out;
}

}  // namespace orbitforge

#include "orbitforge/krawczyk.hpp"

#include <string>

#include "orbitforge/enclosure.hpp"
#include "orbitforge/worker_pool.hpp"

namespace orbitforge {

namespace {

IntervalMatrix point_matrix(const Eigen::MatrixXd& m) {
  IntervalMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j)
      out(i, j) = Interval(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  return out;
}

}  // namespace

VerdictStatus classify(const IntervalVector& k_box, const IntervalVector& input_box) {
  if (k_box.size() != input_box.size()) throw Error(ErrorCode::InvalidArgument, "box dimension mismatch");
  bool inside = true;
  for (std::size_t i = 0; i < k_box.size(); ++i) {
    if (k_box[i].disjoint_from(input_box[i])) return VerdictStatus::NoOrbit;
    inside = inside && k_box[i].interior_of(input_box[i]);
  }
  return inside ? VerdictStatus::Existence : VerdictStatus::Inconclusive;
}

Eigen::MatrixXd krawczyk_preconditioner(const Eigen::MatrixXd& fprime_center) {
  if (fprime_center.rows() != fprime_center.cols() || fprime_center.rows() == 0)
    throw Error(ErrorCode::InvalidArgument, "F' must be square");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(fprime_center);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || !(sv(0) / smin <= 1e12))
    throw Error(ErrorCode::SingularM, "F' at the centre is numerically singular");
  return fprime_center.partialPivLu().inverse();
}

KrawczykVerdict krawczyk_operator(const std::vector<double>& center, const IntervalVector& box,
                                  const IntervalVector& f_center, const IntervalMatrix& fprime_box,
                                  const Eigen::MatrixXd& m) {
  const std::size_t n = center.size();
  if (box.size() != n || f_center.size() != n || fprime_box.rows != n || fprime_box.cols != n ||
      static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n)
    throw Error(ErrorCode::InvalidArgument, "Krawczyk operands disagree in dimension");
  const IntervalMatrix mi = point_matrix(m);
  IntervalVector c(n), offset(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = Interval(center[i]);
    offset[i] = box[i] - c[i];
  }
  const IntervalMatrix contraction = mi * fprime_box - IntervalMatrix::identity(n);
  KrawczykVerdict v;
  v.input_box = box;
  v.k_box = c - mi * f_center - contraction * offset;
  v.status = classify(v.k_box, box);
  return v;
}

KrawczykVerdict krawczyk(const ShootingState& s, double radius, const ClosureConfig& cfg, double defect_safety) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "Krawczyk radius must be positive");
  const std::size_t p = s.period();
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "empty shooting state");
  const std::size_t n = 2 * p;

  std::vector<double> center(n);
  IntervalVector box(n);
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t i = 0; i < 2; ++i) {
      center[2 * k + i] = s.points[k][i];
      box[2 * k + i] = Interval(center[2 * k + i]) + Interval::symmetric(radius);
    }

  IntervalVector f(n);
  IntervalMatrix fp(n, n);
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t next = (k + 1) % p;
    const PoincareEnclosure at_center =
        interval_poincare({Interval(s.points[k][0]), Interval(s.points[k][1])}, cfg, false, defect_safety);
    const PoincareEnclosure over_box = interval_poincare({box[2 * k], box[2 * k + 1]}, cfg, true, defect_safety);
    for (std::size_t i = 0; i < 2; ++i) {
      f[2 * k + i] = Interval(s.points[next][i]) - at_center.image[i];
      for (std::size_t j = 0; j < 2; ++j) fp(2 * k + i, 2 * k + j) = fp(2 * k + i, 2 * k + j) - over_box.derivative[2 * i + j];
      fp(2 * k + i, 2 * next + i) = fp(2 * k + i, 2 * next + i) + Interval(1.0);
    }
  }
  const Eigen::MatrixXd m = krawczyk_preconditioner(shooting_residual(s, cfg).jacobian);
  return krawczyk_operator(center, box, f, fp, m);
}

void verify_census(std::vector<PeriodicOrbit>& orbits, double radius, const ClosureConfig& cfg, std::size_t threads) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "Krawczyk radius must be positive");
  parallel_for(orbits.size(), threads, [&](std::size_t i) {
    PeriodicOrbit& o = orbits[i];
    VerificationRecord rec;
    double r = radius;
    for (int attempt = 0; attempt < 2; ++attempt) {
      rec.radius = r;
      rec.retries = attempt;
      try {
        const KrawczykVerdict v = krawczyk(o.shooting, r, cfg);
        rec.status = v.status;
        rec.k_width_max = v.k_width_max();
      } catch (const Error& e) {
        if (!is_numerical(e.code())) throw;
        rec.status = VerdictStatus::Inconclusive;
        rec.k_width_max = 0.0;
      }
      if (rec.status != VerdictStatus::Inconclusive) break;
      r /= 10.0;
    }
    o.verified = rec;
  });
}

}  // namespace orbitforge

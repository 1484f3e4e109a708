#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "doctest.h"
#include "orbitforge/closure.hpp"
#include "orbitforge/signature.hpp"
#include "test_support.hpp"

using namespace orbitforge;

namespace {

const std::vector<Crossing>& attractor_crossings() {
  static const std::vector<Crossing> cs = [] {
    const LorenzParams p;
    const Trajectory tr = integrate(testing::on_attractor(), p, kDefaultDt, 1000000);
    return crossings(tr, p, SectionConfig{});
  }();
  return cs;
}

PeriodicOrbit close_word(const std::string& word) {
  const ClosureConfig cfg;
  const SymbolSequence target = canonicalize(word);
  std::string last;
  for (const ShootingState& s : seed_candidates(target, {}, attractor_crossings(), 8)) {
    try {
      return newton_close(s, cfg, target);
    } catch (const Error& e) {
      last = e.what();
    }
  }
  FAIL("could not close " << word << ": " << last);
  return {};
}

const PeriodicOrbit& orbit(const std::string& word) {
  static std::map<std::string, PeriodicOrbit> cache;
  auto it = cache.find(word);
  if (it == cache.end()) it = cache.emplace(word, close_word(word)).first;
  return it->second;
}

double hausdorff(const std::vector<State3>& a, const std::vector<State3>& b) {
  auto directed = [](const std::vector<State3>& u, const std::vector<State3>& v) {
    double worst = 0.0;
    for (const State3& x : u) {
      double best = std::numeric_limits<double>::infinity();
      for (const State3& y : v) best = std::min(best, distance(x, y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace

TEST_SUITE("closure") {
  TEST_CASE("short orbits match the reference flow times") {
    CHECK(std::fabs(orbit("LR").T - 1.55865) < 1e-3);
    CHECK(std::fabs(orbit("LLR").T - 2.30591) < 1e-3);
    CHECK(std::fabs(orbit("LLLR").T - 3.02358) < 1e-3);
    for (const char* w : {"LR", "LLR", "LLLR"}) {
      const PeriodicOrbit& o = orbit(w);
      CHECK(o.sequence.word == w);
      CHECK(o.residual < 1e-11);
      double sum = 0.0;
      for (double rt : o.shooting.return_times) {
        CHECK(rt > 0.2);
        CHECK(rt < 1.5);
        sum += rt;
      }
      CHECK(sum == doctest::Approx(o.T).epsilon(1e-15));
      CHECK(canonicalize(orbit_labels(o.shooting, SectionConfig{}).word) == o.sequence);
    }
  }

  TEST_CASE("Poincare map on the LR orbit") {
    const ClosureConfig cfg;
    const PeriodicOrbit& lr = orbit("LR");
    const SectionPoint a = lr.shooting.points[0], b = lr.shooting.points[1];
    const PoincareResult once = poincare_map(a, cfg);
    CHECK(std::hypot(once.point[0] - b[0], once.point[1] - b[1]) < 1e-9);
    const PoincareResult twice = poincare_map(once.point, cfg);
    CHECK(std::hypot(twice.point[0] - a[0], twice.point[1] - a[1]) < 1e-9);
    CHECK(std::fabs(once.return_time + twice.return_time - lr.T) < 1e-9);
    CHECK(std::fabs(once.state.z - 27.0) < 1e-12);
  }

  TEST_CASE("Poincare derivative matches central differences") {
    const ClosureConfig cfg;
    for (const char* w : {"LR", "LLR"}) {
      for (const SectionPoint& q : orbit(w).shooting.points) {
        const PoincareResult r = poincare_map(q, cfg);
        const double h = 1e-6;
        for (int j = 0; j < 2; ++j) {
          SectionPoint qp = q, qm = q;
          qp[static_cast<std::size_t>(j)] += h;
          qm[static_cast<std::size_t>(j)] -= h;
          const PoincareResult rp = poincare_map(qp, cfg), rm = poincare_map(qm, cfg);
          for (int i = 0; i < 2; ++i) {
            const double fd = (rp.point[static_cast<std::size_t>(i)] - rm.point[static_cast<std::size_t>(i)]) / (2 * h);
            CHECK(std::fabs(fd - r.derivative(i, j)) < 1e-5 * std::max(1.0, std::fabs(fd)));
          }
        }
      }
    }
  }

  TEST_CASE("Poincare map is equivariant") {
    const ClosureConfig cfg;
    for (const Crossing& c : std::vector<Crossing>(attractor_crossings().begin(), attractor_crossings().begin() + 20)) {
      const PoincareResult a = poincare_map({c.point.x, c.point.y}, cfg);
      const PoincareResult b = poincare_map({-c.point.x, -c.point.y}, cfg);
      CHECK(std::fabs(a.point[0] + b.point[0]) < 1e-9);
      CHECK(std::fabs(a.point[1] + b.point[1]) < 1e-9);
      CHECK(a.return_time == doctest::Approx(b.return_time).epsilon(1e-12));
    }
  }

  TEST_CASE("no return from a fixed point") {
    const double w = std::sqrt(72.0);
    try {
      poincare_map({w, w}, ClosureConfig{});
      FAIL("expected NoReturn");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoReturn);
    }
  }

  TEST_CASE("shooting residual and Jacobian") {
    const ClosureConfig cfg;
    const PeriodicOrbit& llr = orbit("LLR");
    const ShootingEvaluation ev = shooting_residual(llr.shooting, cfg);
    CHECK(ev.max_residual() < 1e-11);
    REQUIRE(ev.jacobian.rows() == 6);

    // Perturb away from the orbit so the check is not at a special point.
    ShootingState s = llr.shooting;
    s.points[1][0] += 1e-3;
    const ShootingEvaluation base = shooting_residual(s, cfg);
    const double h = 1e-6;
    for (Eigen::Index c = 0; c < 6; ++c) {
      ShootingState sp = s, sm = s;
      sp.points[static_cast<std::size_t>(c / 2)][static_cast<std::size_t>(c % 2)] += h;
      sm.points[static_cast<std::size_t>(c / 2)][static_cast<std::size_t>(c % 2)] -= h;
      const Eigen::VectorXd fd = (shooting_residual(sp, cfg).residual - shooting_residual(sm, cfg).residual) / (2 * h);
      for (Eigen::Index r = 0; r < 6; ++r)
        CHECK(std::fabs(fd(r) - base.jacobian(r, c)) < 1e-5 * std::max(1.0, std::fabs(fd(r))));
    }
    CHECK_THROWS_AS(shooting_residual(ShootingState{}, cfg), Error);
  }

  TEST_CASE("Newton starting at the solution takes no steps") {
    const PeriodicOrbit& lr = orbit("LR");
    const PeriodicOrbit again = newton_close(lr.shooting, ClosureConfig{});
    CHECK(again.iterations == 0);
    CHECK(again.shooting.points == lr.shooting.points);
    CHECK(again.T == lr.T);
  }

  TEST_CASE("Newton failures") {
    const PeriodicOrbit& lr = orbit("LR");
    try {
      newton_close(lr.shooting, ClosureConfig{}, SymbolSequence{"LLR"});
      FAIL("expected LabelMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LabelMismatch);
    }
    ClosureConfig strict;
    strict.max_iter = 0;
    ShootingState off = orbit("LLR").shooting;
    off.points[0][0] += 0.05;
    try {
      newton_close(off, strict);
      FAIL("expected NoConvergence");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoConvergence);
    }
  }

  TEST_CASE("seeding") {
    const PeriodicOrbit& lr = orbit("LR");
    const ShootingState from_lib = seed_from_sequence(SymbolSequence{"LR"}, {lr}, {});
    CHECK(from_lib.points == lr.shooting.points);
    try {
      seed_from_sequence(SymbolSequence{"LLR"}, {}, {});
      FAIL("expected SeedUnavailable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SeedUnavailable);
    }
    const auto seeds = seed_candidates(SymbolSequence{"LLLR"}, {}, attractor_crossings(), 5);
    REQUIRE_FALSE(seeds.empty());
    CHECK(seeds.size() <= 5);
    for (const auto& s : seeds) CHECK(s.period() == 4);
    const PeriodicOrbit o = newton_close(seeds.front(), ClosureConfig{}, SymbolSequence{"LLLR"});
    CHECK(std::fabs(o.T - 3.02358) < 1e-3);
  }

  TEST_CASE("re-integration over one period returns to the start") {
    const ClosureConfig cfg;
    for (const char* w : {"LR", "LLR", "LLLR", "LLRR"}) {
      const PeriodicOrbit& o = orbit(w);
      for (const SectionPoint& q : o.shooting.points) {
        const State3 start = lift(q, cfg.section);
        CHECK(distance(flow(start, cfg.params, o.T), start) < 1e-7);
      }
      const auto samples = orbit_samples(o, cfg, 5);
      CHECK(distance(samples.front(), samples.back()) < 1e-7);
    }
  }

  TEST_CASE("closed LR orbit crosses the section twice per period") {
    const ClosureConfig cfg;
    const PeriodicOrbit& lr = orbit("LR");
    const State3 start = lift(lr.shooting.points[0], cfg.section);
    // Start just past the section so the starting point is not double counted.
    const State3 s = flow(start, cfg.params, 0.01);
    const StepPlan plan = plan_steps(lr.T, kDefaultDt);
    const Trajectory tr = integrate(s, cfg.params, kDefaultDt, plan.whole_steps);
    const auto cs = crossings(tr, cfg.params, cfg.section);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].label != cs[1].label);
  }

  TEST_CASE("mirror images") {
    const ClosureConfig cfg;
    for (const char* w : {"LLR", "LLLR", "LLRR", "LR"}) {
      const PeriodicOrbit& o = orbit(w);
      const PeriodicOrbit m = newton_close(mirror_state(o.shooting), cfg, mirror(o.sequence));
      CHECK(std::fabs(m.T - o.T) < 1e-6);
      CHECK(m.sequence == mirror(o.sequence));
    }
    // A self-symmetric orbit is its own mirror image shifted by half a period,
    // which bounds the Hausdorff distance between the two point sets.
    for (const char* w : {"LR", "LLRR"}) {
      const PeriodicOrbit& o = orbit(w);
      const auto pts = orbit_samples(o, cfg, 100);
      double worst = 0.0;
      for (const State3& s : pts) worst = std::max(worst, distance(flow(s, cfg.params, 0.5 * o.T), symmetry(s)));
      MESSAGE(std::string(w) << " symmetry defect " << worst);
      CHECK(worst < 1e-6);
    }
  }

  TEST_CASE("LR and LLR have distinct signatures") {
    const ClosureConfig cfg;
    auto sig = [&](const PeriodicOrbit& o, double dt, std::size_t n) {
      const State3 s0 = lift(o.shooting.points[0], cfg.section);
      const std::size_t steps = static_cast<std::size_t>(std::llround(o.T / dt));
      const Trajectory tr = integrate(s0, cfg.params, dt, steps);
      const SignatureCurve c = signature_curve(tr, cfg.params, SignatureMethod::Discrete);
      std::vector<State3> out;
      for (std::size_t k = 0; k < n; ++k) {
        const SignaturePoint& q = c.points[k * (c.size() - 1) / (n - 1)];
        out.push_back({q.kappa_tilde, q.kappa_tilde_s, q.tau_tilde});
      }
      return out;
    };
    const std::size_t n = 400;
    const auto lr = sig(orbit("LR"), kDefaultDt, n);
    const auto llr = sig(orbit("LLR"), kDefaultDt, n);
    // Noise floor: the same orbit at half the step.
    const double noise = hausdorff(lr, sig(orbit("LR"), kDefaultDt / 2, n));
    const double between = hausdorff(lr, llr);
    MESSAGE("LR vs LLR " << between << ", noise floor " << noise);
    CHECK(between > 10.0 * noise);
  }
}

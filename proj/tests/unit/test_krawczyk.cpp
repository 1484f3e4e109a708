#include <cmath>
#include <random>

#include "doctest.h"
#include "orbitforge/enclosure.hpp"
#include "orbitforge/krawczyk.hpp"
#include "test_support.hpp"

using namespace orbitforge;

namespace {

// Krawczyk for F(x) = x^2 - c on [center - r, center + r].
KrawczykVerdict scalar_krawczyk(double c, double center, double r) {
  const Interval x = Interval(center) + Interval::symmetric(r);
  const Interval ci(center);
  const IntervalVector f{ci * ci - Interval(c)};
  IntervalMatrix fp(1, 1);
  fp(0, 0) = Interval(2.0) * x;
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = 1.0 / (2.0 * center);
  return krawczyk_operator({center}, {x}, f, fp, m);
}

PeriodicOrbit closed(const std::string& word) {
  const LorenzParams p;
  const Trajectory tr = integrate(testing::on_attractor(), p, kDefaultDt, 400000);
  const auto cs = crossings(tr, p, SectionConfig{});
  for (const ShootingState& s : seed_candidates(SymbolSequence{word}, {}, cs, 8)) {
    try {
      return newton_close(s, ClosureConfig{}, SymbolSequence{word});
    } catch (const Error&) {
    }
  }
  FAIL("no seed closed " << word);
  return {};
}

const PeriodicOrbit& lr() {
  static const PeriodicOrbit o = closed("LR");
  return o;
}

}  // namespace

TEST_SUITE("krawczyk") {
  TEST_CASE("scalar oracle x^2 - 2") {
    const KrawczykVerdict v = scalar_krawczyk(2.0, 1.4, 0.1);
    REQUIRE(v.k_box.size() == 1);
    // K = 1.4 + 0.04 / 2.8 -+ (0.2 / 2.8) * 0.1
    CHECK(v.k_box[0].lo() == doctest::Approx(1.4 + 0.04 / 2.8 - 0.02 / 2.8).epsilon(1e-12));
    CHECK(v.k_box[0].hi() == doctest::Approx(1.4 + 0.04 / 2.8 + 0.02 / 2.8).epsilon(1e-12));
    CHECK(std::fabs(v.k_box[0].lo() - 1.407142) < 1e-6);
    CHECK(std::fabs(v.k_box[0].hi() - 1.421429) < 1e-6);
    CHECK(v.status == VerdictStatus::Existence);
    CHECK(v.k_box[0].contains(std::sqrt(2.0)));
  }

  TEST_CASE("scalar family soundness") {
    std::mt19937_64 rng(9);
    int existence = 0, no_orbit = 0;
    for (double c : {2.0, 3.0, 5.0}) {
      const double root = std::sqrt(c);
      std::uniform_real_distribution<double> centre(root - 0.5, root + 0.5), radius(1e-4, 0.3);
      for (int k = 0; k < 500; ++k) {
        const double x0 = centre(rng), r = radius(rng);
        const KrawczykVerdict v = scalar_krawczyk(c, x0, r);
        const bool inside = x0 - r <= root && root <= x0 + r;
        if (v.status == VerdictStatus::Existence) {
          ++existence;
          CHECK(inside);
        }
        if (v.status == VerdictStatus::NoOrbit) {
          ++no_orbit;
          CHECK_FALSE(inside);
        }
      }
    }
    // Both verdicts actually occur.
    CHECK(existence > 50);
    CHECK(no_orbit > 50);
  }

  TEST_CASE("classification") {
    const IntervalVector box{Interval(0, 1), Interval(0, 1)};
    CHECK(classify({Interval(0.2, 0.3), Interval(0.4, 0.6)}, box) == VerdictStatus::Existence);
    CHECK(classify({Interval(0.0, 0.3), Interval(0.4, 0.6)}, box) == VerdictStatus::Inconclusive);
    CHECK(classify({Interval(0.2, 0.3), Interval(1.5, 2.0)}, box) == VerdictStatus::NoOrbit);
    CHECK_THROWS_AS(classify({Interval(0.2, 0.3)}, box), Error);
  }

  TEST_CASE("singular preconditioner") {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 2.0, 2.0, 4.0;
    try {
      krawczyk_preconditioner(m);
      FAIL("expected SingularM");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularM);
    }
    Eigen::MatrixXd ok(2, 2);
    ok << 2.0, 1.0, 1.0, 3.0;
    CHECK((krawczyk_preconditioner(ok) * ok - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
  }

  TEST_CASE("enclosure of the flow") {
    EnclosureConfig cfg;
    const double w = std::sqrt(72.0);
    const FlowEnclosure fixed = interval_flow(to_interval<Interval>(State3{w, w, 27.0}), 0.5, cfg);
    CHECK(max_width(fixed.state) < 1e-9);
    CHECK(fixed.state.x.contains(w));

    const State3 s0 = testing::on_attractor();
    const FlowEnclosure pt = interval_flow(to_interval<Interval>(s0), 0.7, cfg);
    const FlowResult ref = flow_with_variational(s0, cfg.params, 0.7);
    for (std::size_t i = 0; i < 3; ++i) CHECK(pt.state[i].contains(ref.final_state[i]));
    for (std::size_t k = 0; k < 9; ++k) CHECK(pt.monodromy.a[k].contains(ref.monodromy.a[k]));

    IVec3 box;
    for (std::size_t i = 0; i < 3; ++i) box[i] = Interval(s0[i]) + Interval::symmetric(1e-8);
    const FlowEnclosure wide = interval_flow(box, 0.7, cfg);
    MESSAGE("1e-8 box after 0.7: width " << max_width(wide.state));
    CHECK(max_width(wide.state) < 1e-4);
    // Corners of the box land inside the enclosure.
    for (int corner = 0; corner < 8; ++corner) {
      State3 c = s0;
      for (std::size_t i = 0; i < 3; ++i) c[i] += (corner >> i) & 1 ? 1e-8 : -1e-8;
      const State3 img = flow(c, cfg.params, 0.7);
      for (std::size_t i = 0; i < 3; ++i) CHECK(wide.state[i].contains(img[i]));
    }
    for (std::size_t i = 0; i < 3; ++i) box[i] = Interval(s0[i]) + Interval::symmetric(0.5);
    CHECK_THROWS_AS(interval_flow(box, 1.0, cfg), Error);
  }

  TEST_CASE("enclosure of the return map") {
    const ClosureConfig cfg;
    const PeriodicOrbit& o = lr();
    const SectionPoint a = o.shooting.points[0], b = o.shooting.points[1];
    const PoincareEnclosure pt = interval_poincare({Interval(a[0]), Interval(a[1])}, cfg);
    CHECK(pt.image[0].contains(b[0]));
    CHECK(pt.image[1].contains(b[1]));
    CHECK(pt.return_time.contains(o.shooting.return_times[0]));
    const PoincareResult ref = poincare_map(a, cfg);
    for (int k = 0; k < 4; ++k) CHECK(pt.derivative[static_cast<std::size_t>(k)].contains(ref.derivative(k / 2, k % 2)));

    PoincareEnclosure prev = pt;
    for (double r : {1e-8, 1e-7, 1e-6}) {
      const PoincareEnclosure e = interval_poincare(
          {Interval(a[0]) + Interval::symmetric(r), Interval(a[1]) + Interval::symmetric(r)}, cfg);
      CHECK(prev.image[0].subset_of(e.image[0]));
      CHECK(prev.image[1].subset_of(e.image[1]));
      CHECK(e.image[0].width() >= prev.image[0].width());
      const PoincareResult corner = poincare_map({a[0] + r, a[1] - r}, cfg);
      CHECK(e.image[0].contains(corner.point[0]));
      CHECK(e.image[1].contains(corner.point[1]));
      prev = e;
    }
  }

  TEST_CASE("LR exists at radius 1e-6") {
    const KrawczykVerdict v = krawczyk(lr().shooting, 1e-6, ClosureConfig{});
    MESSAGE("K width " << v.k_width_max());
    CHECK(v.status == VerdictStatus::Existence);
    REQUIRE(v.k_box.size() == 4);
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t i = 0; i < 2; ++i) CHECK(v.k_box[2 * k + i].contains(lr().shooting.points[k][i]));
  }

  TEST_CASE("displaced boxes never verify") {
    ShootingState far;
    far.points = {{50.0, 50.0}};
    far.return_times = {1.0};
    bool existence = false;
    try {
      existence = krawczyk(far, 1e-3, ClosureConfig{}).status == VerdictStatus::Existence;
    } catch (const Error& e) {
      MESSAGE("far box: " << e.what());
    }
    CHECK_FALSE(existence);

    ShootingState shifted = lr().shooting;
    shifted.points[0][0] += 1e-3;
    shifted.points[1][0] -= 1e-3;
    const KrawczykVerdict v = krawczyk(shifted, 1e-6, ClosureConfig{});
    CHECK(v.status != VerdictStatus::Existence);
    CHECK(v.status == VerdictStatus::NoOrbit);
  }

  TEST_CASE("shrinking an Existence box never yields NoOrbit") {
    const ClosureConfig cfg;
    for (const std::string w : {"LR", "LLR"}) {
      const PeriodicOrbit o = w == "LR" ? lr() : closed(w);
      double r = 1e-6;
      REQUIRE(krawczyk(o.shooting, r, cfg).status == VerdictStatus::Existence);
      for (int k = 0; k < 4; ++k) {
        r /= 2.0;
        CHECK(krawczyk(o.shooting, r, cfg).status != VerdictStatus::NoOrbit);
      }
    }
  }

  TEST_CASE("verify_census") {
    const ClosureConfig cfg;
    std::vector<PeriodicOrbit> none;
    verify_census(none, 1e-6, cfg);
    CHECK(none.empty());
    std::vector<PeriodicOrbit> twins{lr(), lr()};
    verify_census(twins, 1e-6, cfg, 2);
    CHECK(twins[0].verified.status == VerdictStatus::Existence);
    CHECK(twins[0].verified.status == twins[1].verified.status);
    CHECK(twins[0].verified.k_width_max == twins[1].verified.k_width_max);
    CHECK(twins[0].verified.radius == 1e-6);
    CHECK(twins[0].verified.retries == 0);
    CHECK_THROWS_AS(verify_census(twins, 0.0, cfg), Error);
  }
}

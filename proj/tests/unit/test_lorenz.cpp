#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "orbitforge/lorenz.hpp"
#include "orbitforge/error.hpp"
#include "test_support.hpp"

using namespace orbitforge;
using doctest::Approx;

TEST_SUITE("lorenz") {
  TEST_CASE("vector field at reference points") {
    const LorenzParams p;
    const State3 o = rhs(State3{0, 0, 0}, p);
    CHECK(o.x == 0.0);
    CHECK(o.y == 0.0);
    CHECK(o.z == 0.0);
    const State3 a = rhs(State3{1, 1, 1}, p);
    CHECK(a.x == 0.0);
    CHECK(a.y == 26.0);
    CHECK(a.z == Approx(-5.0 / 3.0).epsilon(1e-15));
    const double w = std::sqrt(72.0);
    const State3 wing = rhs(State3{w, w, 27.0}, p);
    CHECK(std::fabs(wing.x) < 1e-12);
    CHECK(std::fabs(wing.y) < 1e-12);
    CHECK(std::fabs(wing.z) < 1e-12);
  }

  TEST_CASE("jacobian matches central differences at random states") {
    const LorenzParams p;
    std::mt19937_64 rng(11);
    const double h = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
      const State3 s = testing::random_state(rng);
      const Matrix3 j = jacobian(s, p);
      for (std::size_t c = 0; c < 3; ++c) {
        State3 e{};
        e[c] = h;
        const State3 d = (rhs(s + e, p) - rhs(s - e, p)) / (2.0 * h);
        for (std::size_t r = 0; r < 3; ++r) CHECK(std::fabs(d[r] - j(r, c)) < 1e-6);
      }
    }
  }

  TEST_CASE("jacobian at the origin") {
    const Matrix3 j = jacobian(State3{0, 0, 0}, LorenzParams{});
    const double expected[3][3] = {{-10, 10, 0}, {28, -1, 0}, {0, 0, -8.0 / 3.0}};
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) CHECK(j(r, c) == expected[r][c]);
  }

  TEST_CASE("equivariance is exact") {
    const LorenzParams p;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
      const State3 s = testing::random_state(rng);
      const State3 a = rhs(symmetry(s), p);
      const State3 b = symmetry(rhs(s, p));
      CHECK(a.x == b.x);
      CHECK(a.y == b.y);
      CHECK(a.z == b.z);
      const State3 ss = symmetry(symmetry(s));
      CHECK(ss.x == s.x);
    }
    const State3 m = symmetry(State3{1, 2, 3});
    CHECK(m.x == -1.0);
    CHECK(m.y == -2.0);
    CHECK(m.z == 3.0);
  }

  TEST_CASE("fixed points and their spectra") {
    const LorenzParams p;
    const auto fps = fixed_points(p);
    REQUIRE(fps.size() == 3);
    for (const auto& f : fps) {
      const State3 v = rhs(f.location, p);
      CHECK(max_abs(v) < 1e-12);
    }
    CHECK(fps[1].location.z == 27.0);
    CHECK(fps[2].location.z == 27.0);

    // Origin: the z direction decouples, the rest is a quadratic.
    const auto& ev0 = fps[0].eigenvalues;
    REQUIRE(ev0.size() == 3);
    CHECK(ev0[0].real() == Approx((-11.0 + std::sqrt(1201.0)) / 2.0).epsilon(1e-12));
    CHECK(ev0[1].real() == Approx(-8.0 / 3.0).epsilon(1e-12));
    CHECK(ev0[2].real() == Approx((-11.0 - std::sqrt(1201.0)) / 2.0).epsilon(1e-12));

    // Wings: compare against Eigen's general eigensolver.
    for (std::size_t k = 1; k < 3; ++k) {
      const Matrix3 j = jacobian(fps[k].location, p);
      Eigen::Matrix3d m;
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j(r, c);
      const Eigen::EigenSolver<Eigen::Matrix3d> es(m);
      for (const auto& lam : fps[k].eigenvalues) {
        double best = 1e9;
        for (Eigen::Index i = 0; i < 3; ++i) best = std::min(best, std::abs(es.eigenvalues()(i) - lam));
        CHECK(best < 1e-10);
      }
      CHECK(fps[k].classification == FixedPointKind::Wing);
    }
    // Local rotation period on the wing.
    const double omega = fps[1].eigenvalues[0].imag();
    CHECK(2.0 * M_PI / omega == Approx(0.62).epsilon(0.01));
  }

  TEST_CASE("r below one leaves only the origin") {
    LorenzParams p;
    p.r = 0.5;
    CHECK(fixed_points(p).size() == 1);
  }

  TEST_CASE("parameter validation") {
    LorenzParams p;
    p.sigma = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.sigma = std::nan("");
    CHECK_THROWS_AS(p.validate(), Error);
  }

  TEST_CASE("time derivatives") {
    const LorenzParams p;
    const double w = std::sqrt(72.0);
    for (const State3& d : time_derivatives(State3{w, w, 27.0}, p, 3)) CHECK(max_abs(d) < 1e-10);

    const State3 s{1, 1, 1};
    const auto d = time_derivatives(s, p, 3);
    REQUIRE(d.size() == 3);
    const State3 ztt = jacobian(s, p) * State3{0, 26, -5.0 / 3.0};
    CHECK(d[1].x == Approx(ztt.x));
    CHECK(d[1].y == Approx(ztt.y));
    CHECK(d[1].z == Approx(ztt.z));
    CHECK_THROWS_AS(time_derivatives(s, p, 4), Error);

    // Central differences of the field along a finely integrated trajectory.
    const State3 x = testing::on_attractor();
    const auto jet = time_derivatives(x, p, 3);
    double prev_err = 0.0;
    for (double h : {1e-3, 5e-4}) {
      State3 fwd = x, bwd = x;
      for (int i = 0; i < 8; ++i) {
        fwd = rk4_step(fwd, p, h / 8);
        bwd = rk4_step(bwd, p, -h / 8);
      }
      const State3 ztt_fd = (rhs(fwd, p) - rhs(bwd, p)) / (2.0 * h);
      const State3 zttt_fd = (rhs(fwd, p) - 2.0 * rhs(x, p) + rhs(bwd, p)) / (h * h);
      const double err = norm(ztt_fd - jet[1]) / norm(jet[1]);
      CHECK(err < 1e-4);
      CHECK(norm(zttt_fd - jet[2]) / norm(jet[2]) < 1e-3);
      if (prev_err > 0.0) CHECK(err < prev_err / 3.0);  // second order
      prev_err = err;
    }
  }
}

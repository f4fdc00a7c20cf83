#include "evfi/errors.hpp"
#include "evfi/scene.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace evfi;

namespace {

SceneSpec blank(int w, int h, double bg) {
  SceneSpec s;
  s.width = w;
  s.height = h;
  s.background = bg;
  return s;
}

// Log-intensity sign change per pixel between two frames.
Plane<int> sign_change(const Frame& a, const Frame& b) {
  Plane<int> s(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double d = std::log(b(i)) - std::log(a(i));
    s(i) = d > 1e-12 ? 1 : (d < -1e-12 ? -1 : 0);
  }
  return s;
}

}  // namespace

TEST_CASE("empty scene renders the background") {
  const auto f = render_frame(blank(16, 9, 0.37), 0.5);
  CHECK(f.rows() == 9);
  CHECK(f.cols() == 16);
  CHECK((f == 0.37).all());
}

TEST_CASE("1x3 column butterfly gives the -1 0 1 encoding") {
  auto s = blank(1, 3, 0.2);
  const double tau = 0.5;
  Sprite b{Shape::rect(1, 1), 0.9, {}};
  b.trajectory.segments = {Segment{0.0, tau, {0.0}, {0.0}}, Segment{tau, 1.0, {0.0}, {0.0, 2.0 / (1.0 - tau)}}};
  s.sprites = {b};
  const auto i0 = render_frame(s, 0.0);
  CHECK((render_frame(s, tau) == i0).all());
  const auto enc = sign_change(i0, render_frame(s, 1.0));
  CHECK(enc(0, 0) == -1);
  CHECK(enc(1, 0) == 0);
  CHECK(enc(2, 0) == 1);
}

TEST_CASE("constant velocity sprite is a quarter of the way along at t=0.25") {
  auto s = blank(24, 16, 0.1);
  s.sprites = {Sprite{Shape::rect(3, 3), 0.8, Trajectory::linear(8.0, 7.0, 4.0, 0.0)}};
  const auto p = s.sprites[0].trajectory.position(0.25);
  CHECK(p.x() == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(p.y() == 7.0);
  auto moved = s;
  moved.sprites[0].trajectory = Trajectory::stationary(9.0, 7.0);
  CHECK((render_frame(s, 0.25) == render_frame(moved, 0.0)).all());
  // A 3x3 block centered on (9,7) covers columns 8..10 and rows 6..8.
  const auto f = render_frame(s, 0.25);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 24; ++x) {
      const bool inside = x >= 8 && x <= 10 && y >= 6 && y <= 8;
      CHECK(f(y, x) == doctest::Approx(inside ? 0.8 : 0.1));
    }
}

TEST_CASE("render_frame rejects times outside [0,1]") {
  const auto s = make_preset("butterfly2d");
  CHECK_THROWS_AS(render_frame(s, -0.01), DomainError);
  CHECK_THROWS_AS(render_frame(s, 1.5), DomainError);
}

TEST_CASE("sub-pixel positions spread coverage bilinearly") {
  auto s = blank(10, 10, 0.0);
  s.sprites = {Sprite{Shape::rect(1, 1), 1.0, Trajectory::stationary(4.25, 5.5)}};
  const auto f = render_frame(s, 0.0);
  CHECK(f(5, 4) == doctest::Approx(0.75 * 0.5));
  CHECK(f(5, 5) == doctest::Approx(0.25 * 0.5));
  CHECK(f(6, 4) == doctest::Approx(0.75 * 0.5));
  CHECK(f(6, 5) == doctest::Approx(0.25 * 0.5));
  CHECK(f.sum() == doctest::Approx(1.0));
}

TEST_CASE("later sprites occlude earlier ones") {
  auto s = blank(16, 16, 0.1);
  s.sprites = {Sprite{Shape::rect(5, 5), 0.3, Trajectory::stationary(7, 7)},
               Sprite{Shape::rect(3, 3), 0.9, Trajectory::stationary(8, 8)}};
  const auto f = render_frame(s, 0.0);
  CHECK(f(8, 8) == doctest::Approx(0.9));
  CHECK(f(5, 5) == doctest::Approx(0.3));
  CHECK(f(0, 0) == doctest::Approx(0.1));
}

TEST_CASE("ground truth flow") {
  SUBCASE("t_a == t_b gives zero flow") {
    for (const auto& name : preset_names()) {
      const auto s = make_preset(name);
      for (double t : {0.0, 0.3, 1.0}) {
        const auto f = ground_truth_flow(s, t, t);
        CHECK((f.u == 0.0).all());
        CHECK((f.v == 0.0).all());
      }
    }
  }
  SUBCASE("uniform velocity sprite carries its displacement") {
    auto s = blank(32, 20, 0.2);
    s.sprites = {Sprite{Shape::rect(4, 3), 0.7, Trajectory::linear(10.5, 9.0, 5.0, -2.0)}};
    const auto f = ground_truth_flow(s, 0.0, 1.0);
    const auto cov = sprite_coverage(s, 0, 0.0);
    int on = 0;
    for (int y = 0; y < 20; ++y)
      for (int x = 0; x < 32; ++x) {
        if (cov(y, x) >= 0.5) {
          ++on;
          CHECK(f.u(y, x) == doctest::Approx(5.0));
          CHECK(f.v(y, x) == doctest::Approx(-2.0));
        } else {
          CHECK(f.u(y, x) == 0.0);
          CHECK(f.v(y, x) == 0.0);
        }
      }
    CHECK(on == 12);
  }
  SUBCASE("butterfly2d does not move before tau") {
    const auto s = make_preset("butterfly2d");
    const auto m = butterfly_marks("butterfly2d");
    const auto f = ground_truth_flow(s, 0.0, m.tau);
    CHECK((f.u == 0.0).all());
    CHECK((f.v == 0.0).all());
  }
}

TEST_CASE("flow composes along single-sprite paths") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = blank(48, 48, 0.25);
    // Integer displacements at the sample times keep the advected pixel on
    // the grid.
    const double vx = 4.0 * rng.integer(-3, 3);
    const double vy = 4.0 * rng.integer(-3, 3);
    s.sprites = {Sprite{Shape::rect(rng.integer(1, 5), rng.integer(1, 5)), 0.8,
                        Trajectory::linear(24.0 - vx / 2, 24.0 - vy / 2, vx, vy)}};
    const double ta = 0.0, tb = 0.25, tc = 0.75;
    const auto ab = ground_truth_flow(s, ta, tb);
    const auto bc = ground_truth_flow(s, tb, tc);
    const auto ac = ground_truth_flow(s, ta, tc);
    const auto cov = sprite_coverage(s, 0, ta);
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 48; ++x) {
        if (cov(y, x) < 0.5) continue;
        const int x2 = int(std::lround(x + ab.u(y, x)));
        const int y2 = int(std::lround(y + ab.v(y, x)));
        REQUIRE(x2 >= 0);
        REQUIRE(y2 >= 0);
        CHECK(std::abs(ab.u(y, x) + bc.u(y2, x2) - ac.u(y, x)) <= 1e-9);
        CHECK(std::abs(ab.v(y, x) + bc.v(y2, x2) - ac.v(y, x)) <= 1e-9);
      }
  }
}

TEST_CASE("presets") {
  SUBCASE("butterfly2d rests then moves horizontally then vertically") {
    const auto s = make_preset("butterfly2d");
    const auto m = butterfly_marks("butterfly2d");
    const auto& tr = s.sprites.at(0).trajectory;
    for (double t = 0.0; t <= m.tau; t += m.tau / 16) CHECK(tr.position(t) == m.rest);
    CHECK(tr.position(1.0) == m.arrival);
    // Horizontal leg first: y stays at rest until x reaches the arrival column.
    const auto corner = Eigen::Vector2d(m.arrival.x(), m.rest.y());
    bool reached = false;
    for (int k = 0; k <= 64; ++k) {
      const double t = m.tau + (1.0 - m.tau) * k / 64.0;
      const auto p = tr.position(t);
      if (!reached) {
        CHECK(p.y() == m.rest.y());
        reached = p == corner;
      } else {
        CHECK(p.x() == m.arrival.x());
      }
    }
    CHECK(reached);
  }
  SUBCASE("uniform is linear") {
    const auto s = make_preset("uniform");
    for (const auto& sp : s.sprites) {
      REQUIRE(sp.trajectory.segments.size() == 1);
      const auto& seg = sp.trajectory.segments[0];
      CHECK(seg.x.size() <= 2);
      CHECK(seg.y.size() <= 2);
      CHECK(seg.x.at(1) != 0.0);
    }
  }
  SUBCASE("accelerated is quadratic from rest") {
    const auto s = make_preset("accelerated");
    for (const auto& sp : s.sprites) {
      REQUIRE(sp.trajectory.segments.size() == 1);
      const auto& seg = sp.trajectory.segments[0];
      REQUIRE(seg.x.size() == 3);
      CHECK(seg.x[1] == 0.0);
      CHECK(seg.x[2] != 0.0);
    }
  }
  SUBCASE("unknown name") { CHECK_THROWS_AS(make_preset("moth"), LookupError); }
  SUBCASE("all presets validate") {
    for (const auto& name : preset_names()) CHECK_NOTHROW(make_preset(name).validate());
    for (const auto& s : piecewise_scenes()) CHECK_NOTHROW(s.validate());
  }
}

TEST_CASE("rendering is deterministic and in range") {
  for (const auto& name : preset_names()) {
    const auto s = make_preset(name);
    for (int k = 0; k < 64; ++k) {
      const double t = k / 63.0;
      const auto a = render_frame(s, t);
      CHECK((a == render_frame(s, t)).all());
      CHECK(a.minCoeff() >= 0.0);
      CHECK(a.maxCoeff() <= 1.0);
    }
  }
}

TEST_CASE("scene validation") {
  auto s = blank(16, 16, 0.2);
  CHECK_NOTHROW(s.validate());
  s.sprites = {Sprite{Shape::rect(3, 3), 0.8, Trajectory::linear(4, 8, 20, 0)}};
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s.sprites[0].trajectory = Trajectory::stationary(8, 8);
  s.sprites[0].intensity = 1.2;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s.sprites[0].intensity = 0.8;
  s.sprites[0].trajectory.segments = {Segment{0.0, 0.5, {8.0}, {8.0}}, Segment{0.5, 1.0, {9.0}, {8.0}}};
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  CHECK_THROWS_AS(blank(4, 16, 0.2).validate(), ArgumentError);
}

TEST_CASE("scene files round-trip") {
  for (const auto& name : preset_names()) {
    const auto s = make_preset(name);
    std::stringstream io;
    write_scene(io, s);
    const auto back = read_scene(io);
    CHECK(back.width == s.width);
    CHECK(back.height == s.height);
    CHECK(back.sprites.size() == s.sprites.size());
    for (double t : {0.0, 0.4, 1.0}) CHECK((render_frame(back, t) == render_frame(s, t)).all());
  }
  std::istringstream bad("scene 1\nwidth 16\nheight 16\nbackground 0.2\nsprite blob 3 intensity 0.5\n");
  CHECK_THROWS(read_scene(bad));
}

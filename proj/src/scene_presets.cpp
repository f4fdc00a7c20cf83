#include "evfi/errors.hpp"
#include "evfi/scene.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace evfi {

namespace {

constexpr double kBackground = 0.2;
constexpr double kSprite = 0.9;

SceneSpec butterfly1d() {
  SceneSpec s;
  s.width = 12;
  s.height = 8;
  s.background = kBackground;
  Sprite b{Shape::rect(1, 1), kSprite, {}};
  b.trajectory.segments = {Segment{0.0, 0.5, {4.0}, {4.0}}, Segment{0.5, 1.0, {4.0, 4.0}, {4.0}}};
  s.sprites = {b};
  return s;
}

SceneSpec butterfly2d() {
  SceneSpec s;
  s.width = 40;
  s.height = 40;
  s.background = kBackground;
  Sprite b{Shape::rect(5, 5), kSprite, {}};
  b.trajectory.segments = {Segment{0.0, 0.5, {10.0}, {10.0}}, Segment{0.5, 0.75, {10.0, 64.0}, {10.0}},
                           Segment{0.75, 1.0, {26.0}, {10.0, 64.0}}};
  s.sprites = {b};
  return s;
}

// A strongly textured band over a faint one, both travelling kTravel px to the
// right. The strong band's log intensity is a triangle wave, so every pixel it
// crosses sees a constant rate of log change and fires evenly in time. The
// faint band stays below one contrast threshold: it fires nothing but still
// gives the frame difference a population of small nonzero values.
constexpr double kTravel = 6.0;
constexpr double kDarkBackground = 0.006;

SceneSpec travelling_bands(const std::vector<double>& x_coeffs) {
  SceneSpec s;
  s.width = 256;
  s.height = 160;
  s.background = kDarkBackground;
  const double y = 80.5;
  Sprite strong{Shape::wave(79, 4, 3), 1.0, {{Segment{0.0, 1.0, x_coeffs, {y}}}}};
  Sprite faint{Shape::wave(39, 8, 1), 1.14 * kDarkBackground, {{Segment{0.0, 1.0, x_coeffs, {y + 7.0}}}}};
  s.sprites = {strong, faint};
  return s;
}

SceneSpec uniform() { return travelling_bands({128.0 - 0.5 * kTravel, kTravel}); }

// x(t) = x0 + a t^2 / 2 with zero initial velocity.
SceneSpec accelerated() { return travelling_bands({128.0 - 0.5 * kTravel, 0.0, kTravel}); }

// Piecewise-linear path that moves dx during [xa,xb] and dy during [ya,yb].
Trajectory l_path(double x0, double y0, double dx, double dy, double xa, double xb, double ya, double yb) {
  std::vector<double> knots{0.0, xa, xb, ya, yb, 1.0};
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  auto ramp = [](double t, double a, double b) { return std::clamp((t - a) / (b - a), 0.0, 1.0); };
  Trajectory tr;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double t0 = knots[k];
    const double t1 = knots[k + 1];
    const double x_0 = x0 + dx * ramp(t0, xa, xb);
    const double y_0 = y0 + dy * ramp(t0, ya, yb);
    const double vx = (x0 + dx * ramp(t1, xa, xb) - x_0) / (t1 - t0);
    const double vy = (y0 + dy * ramp(t1, ya, yb) - y_0) / (t1 - t0);
    tr.segments.push_back(Segment{t0, t1, {x_0, vx}, {y_0, vy}});
  }
  return tr;
}

}  // namespace

std::vector<SceneSpec> piecewise_scenes() {
  constexpr double d = 4.0;
  auto scene = [](Sprite sp) {
    SceneSpec s;
    s.width = 64;
    s.height = 64;
    s.background = kBackground;
    s.sprites = {std::move(sp)};
    return s;
  };
  return {
      scene({Shape::rect(12, 12), 0.9, l_path(28, 28, d, d, 0.0, 0.5, 0.5, 1.0)}),
      scene({Shape::rect(12, 12), 0.85, l_path(28, 34, d, -d, 0.5, 1.0, 0.0, 0.5)}),
      scene({Shape::rect(12, 16), 0.8, l_path(34, 28, -d, d, 0.0, 0.3, 0.3, 1.0)}),
      scene({Shape::rect(10, 12), 0.05, l_path(28, 28, d, d, 0.2, 0.6, 0.6, 0.9)}),
      scene({Shape::rect(16, 12), 0.7, l_path(28, 28, d, d, 0.25, 0.5, 0.0, 0.25)}),
  };
}

std::vector<std::string> preset_names() { return {"butterfly1d", "butterfly2d", "uniform", "accelerated"}; }

SceneSpec make_preset(std::string_view name) {
  if (name == "butterfly1d") return butterfly1d();
  if (name == "butterfly2d") return butterfly2d();
  if (name == "uniform") return uniform();
  if (name == "accelerated") return accelerated();
  throw LookupError("unknown preset '" + std::string(name) + "'");
}

ButterflyMarks butterfly_marks(std::string_view name) {
  if (name == "butterfly1d") return {{4.0, 4.0}, {5.0, 4.0}, {6.0, 4.0}, 0.5};
  if (name == "butterfly2d") return {{10.0, 10.0}, {18.0, 18.0}, {26.0, 26.0}, 0.5};
  throw LookupError("no butterfly marks for '" + std::string(name) + "'");
}

}  // namespace evfi

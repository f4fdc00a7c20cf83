#pragma once

#include "evfi/types.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace evfi {

/// One piece of a sprite path. Coefficients are ascending powers of the
/// local time (t - t_start); positions are in pixels.
struct Segment {
  double t_start = 0.0;
  double t_end = 1.0;
  std::vector<double> x;
  std::vector<double> y;
};

/// Piecewise-polynomial path covering [0,1] contiguously.
struct Trajectory {
  std::vector<Segment> segments;

  Eigen::Vector2d position(double t) const;

  /// Throws ArgumentError when segments leave gaps, overlap, or jump.
  void validate() const;

  static Trajectory stationary(double x, double y);
  static Trajectory linear(double x0, double y0, double dx, double dy);
};

enum class ShapeKind { rect, disk, gauss, ridge, wave };

/// Procedural sprite footprint.
///   rect  : size_x by size_y solid block
///   disk  : solid disk of the given radius
///   gauss : Gaussian coverage falloff with the given sigma (radius = ceil(3 sigma))
///   ridge : size_x by size_y block whose log intensity rises linearly from the
///           background over `ramp` columns on each side to a central plateau
///   wave  : size_x by size_y block whose log intensity follows a triangle wave
///           between the background and the sprite intensity, half period
///           `ramp` + 1 columns
struct Shape {
  ShapeKind kind = ShapeKind::rect;
  double size_x = 1.0;
  double size_y = 1.0;
  double radius = 0.0;
  double sigma = 0.0;
  double ramp = 0.0;

  static Shape rect(int w, int h) { return {ShapeKind::rect, double(w), double(h), 0, 0, 0}; }
  static Shape disk(double r) { return {ShapeKind::disk, 0, 0, r, 0, 0}; }
  static Shape gauss(double s) { return {ShapeKind::gauss, 0, 0, 0, s, 0}; }
  static Shape ridge(int w, int h, int ramp) {
    return {ShapeKind::ridge, double(w), double(h), 0, 0, double(ramp)};
  }
  static Shape wave(int w, int h, int ramp) { return {ShapeKind::wave, double(w), double(h), 0, 0, double(ramp)}; }
};

struct Sprite {
  Shape shape;
  double intensity = 1.0;
  Trajectory trajectory;
};

struct SceneSpec {
  int width = 0;
  int height = 0;
  double background = 0.0;
  std::vector<Sprite> sprites;
  std::vector<double> frame_times{0.0, 1.0};

  /// Checks the size, intensity and border-margin invariants.
  void validate() const;
};

/// Rasterized sprite: coverage in [0,1] and per-texel intensity, anchored at
/// the grid center.
struct SpriteRaster {
  Plane<double> coverage;
  Plane<double> texture;
};

SpriteRaster rasterize(const Shape& shape, double intensity, double background);

/// Renders the scene at time t. Sprites are splatted bilinearly at their
/// (sub-pixel) positions and composited in order, later over earlier.
Frame render_frame(const SceneSpec& scene, double t);

/// Splatted coverage of a single sprite at time t.
Plane<double> sprite_coverage(const SceneSpec& scene, std::size_t sprite, double t);

/// Forward flow stored at t_a pixels: each pixel at least half covered by a
/// sprite at t_a (topmost wins) carries that sprite's displacement to t_b.
/// Background is static and carries zero flow.
FlowField ground_truth_flow(const SceneSpec& scene, double t_a, double t_b);

/// Preset names: butterfly1d, butterfly2d, uniform, accelerated.
SceneSpec make_preset(std::string_view name);
std::vector<std::string> preset_names();

/// Five scenes with axis-separable piecewise motion: one rectangle moving 4 px
/// along x and 4 px along y in separate, differently timed legs.
std::vector<SceneSpec> piecewise_scenes();

/// Pixel row/column the butterfly toy scenes use as Y0, Y1, Y2.
struct ButterflyMarks {
  Eigen::Vector2d rest;
  Eigen::Vector2d midpoint;
  Eigen::Vector2d arrival;
  double tau;
};
ButterflyMarks butterfly_marks(std::string_view name);

/// Plain-text scene files. Format:
///   scene 1
///   width <int>
///   height <int>
///   background <real>
///   frame_times <t0> <t1> ...
///   sprite <rect w h | disk r | gauss sigma | ridge w h ramp | wave w h ramp> intensity <real>
///   segment <t_start> <t_end> x <c0> [c1 ...] y <c0> [c1 ...]
/// Segment lines attach to the preceding sprite. '#' starts a comment.
void write_scene(std::ostream& out, const SceneSpec& scene);
SceneSpec read_scene(std::istream& in);
SceneSpec load_scene_file(const std::string& path);
void save_scene_file(const SceneSpec& scene, const std::string& path);

}  // namespace evfi

#include "evfi/scene.hpp"

#include "evfi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace evfi {

namespace {

double horner(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

struct Layer {
  Plane<double> alpha;
  Plane<double> premult;
};

// Bilinear splat of a raster centered at (cx, cy).
Layer splat(const SpriteRaster& r, double cx, double cy, int width, int height) {
  Layer layer{Plane<double>::Zero(height, width), Plane<double>::Zero(height, width)};
  const double ox = cx - 0.5 * double(r.coverage.cols() - 1);
  const double oy = cy - 0.5 * double(r.coverage.rows() - 1);
  const double bx = std::floor(ox);
  const double by = std::floor(oy);
  const double fx = ox - bx;
  const double fy = oy - by;
  const double w[2][2] = {{(1 - fy) * (1 - fx), (1 - fy) * fx}, {fy * (1 - fx), fy * fx}};
  for (Eigen::Index i = 0; i < r.coverage.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.coverage.cols(); ++j) {
      const double c = r.coverage(i, j);
      if (c == 0.0) continue;
      const double ct = c * r.texture(i, j);
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          if (w[dy][dx] == 0.0) continue;
          const long y = long(by) + long(i) + dy;
          const long x = long(bx) + long(j) + dx;
          if (x < 0 || y < 0 || x >= width || y >= height) continue;
          layer.alpha(y, x) += w[dy][dx] * c;
          layer.premult(y, x) += w[dy][dx] * ct;
        }
      }
    }
  }
  return layer;
}

void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("time " + std::to_string(t) + " outside [0,1]");
}

}  // namespace

Eigen::Vector2d Trajectory::position(double t) const {
  if (segments.empty()) throw ArgumentError("trajectory has no segments");
  const Segment* seg = &segments.back();
  for (const auto& s : segments) {
    if (t <= s.t_end) {
      seg = &s;
      break;
    }
  }
  const double local = t - seg->t_start;
  return {horner(seg->x, local), horner(seg->y, local)};
}

void Trajectory::validate() const {
  constexpr double kTimeTol = 1e-12;
  constexpr double kPosTol = 1e-9;
  if (segments.empty()) throw ArgumentError("trajectory has no segments");
  if (std::abs(segments.front().t_start) > kTimeTol || std::abs(segments.back().t_end - 1.0) > kTimeTol)
    throw ArgumentError("trajectory must cover [0,1]");
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& s = segments[k];
    if (!(s.t_end > s.t_start)) throw ArgumentError("segment " + std::to_string(k) + " has empty span");
    if (s.x.empty() || s.y.empty()) throw ArgumentError("segment " + std::to_string(k) + " lacks coefficients");
    if (k == 0) continue;
    const auto& p = segments[k - 1];
    if (std::abs(p.t_end - s.t_start) > kTimeTol)
      throw ArgumentError("segments " + std::to_string(k - 1) + " and " + std::to_string(k) + " are not contiguous");
    const double dt = p.t_end - p.t_start;
    const double jx = horner(p.x, dt) - horner(s.x, 0.0);
    const double jy = horner(p.y, dt) - horner(s.y, 0.0);
    if (std::hypot(jx, jy) > kPosTol)
      throw ArgumentError("trajectory jumps at t=" + std::to_string(s.t_start));
  }
}

Trajectory Trajectory::stationary(double x, double y) { return {{Segment{0.0, 1.0, {x}, {y}}}}; }

Trajectory Trajectory::linear(double x0, double y0, double dx, double dy) {
  return {{Segment{0.0, 1.0, {x0, dx}, {y0, dy}}}};
}

SpriteRaster rasterize(const Shape& shape, double intensity, double background) {
  SpriteRaster r;
  switch (shape.kind) {
    case ShapeKind::rect: {
      const auto w = Eigen::Index(std::lround(shape.size_x));
      const auto h = Eigen::Index(std::lround(shape.size_y));
      if (w < 1 || h < 1) throw ArgumentError("rect sprite needs positive size");
      r.coverage = Plane<double>::Ones(h, w);
      break;
    }
    case ShapeKind::disk: {
      if (!(shape.radius > 0)) throw ArgumentError("disk sprite needs positive radius");
      const auto R = Eigen::Index(std::ceil(shape.radius));
      r.coverage = Plane<double>::Zero(2 * R + 1, 2 * R + 1);
      for (Eigen::Index i = 0; i <= 2 * R; ++i)
        for (Eigen::Index j = 0; j <= 2 * R; ++j)
          if (std::hypot(double(i - R), double(j - R)) <= shape.radius) r.coverage(i, j) = 1.0;
      break;
    }
    case ShapeKind::gauss: {
      if (!(shape.sigma > 0)) throw ArgumentError("gauss sprite needs positive sigma");
      const auto R = Eigen::Index(std::ceil(3.0 * shape.sigma));
      r.coverage.resize(2 * R + 1, 2 * R + 1);
      for (Eigen::Index i = 0; i <= 2 * R; ++i)
        for (Eigen::Index j = 0; j <= 2 * R; ++j) {
          const double d2 = double((i - R) * (i - R) + (j - R) * (j - R));
          r.coverage(i, j) = std::exp(-d2 / (2.0 * shape.sigma * shape.sigma));
        }
      break;
    }
    case ShapeKind::ridge:
    case ShapeKind::wave: {
      const auto w = Eigen::Index(std::lround(shape.size_x));
      const auto h = Eigen::Index(std::lround(shape.size_y));
      if (w < 1 || h < 1) throw ArgumentError("textured sprite needs positive size");
      if (!(background > 0 && intensity > 0)) throw ArgumentError("textured sprite needs positive intensities");
      r.coverage = Plane<double>::Ones(h, w);
      r.texture.resize(h, w);
      const double ramp = shape.ramp + 1.0;
      for (Eigen::Index j = 0; j < w; ++j) {
        double p;
        if (shape.kind == ShapeKind::ridge) {
          p = std::min({1.0, double(j + 1) / ramp, double(w - j) / ramp});
        } else {
          p = 1.0 - std::abs(1.0 - std::fmod(double(j + 1) / ramp, 2.0));
        }
        r.texture.col(j).setConstant(background * std::pow(intensity / background, p));
      }
      return r;
    }
  }
  r.texture = Plane<double>::Constant(r.coverage.rows(), r.coverage.cols(), intensity);
  return r;
}

void SceneSpec::validate() const {
  if (width < 8 || height < 8) throw ArgumentError("scene must be at least 8x8");
  if (!(background >= 0.0 && background <= 1.0)) throw ArgumentError("background outside [0,1]");
  if (frame_times.empty()) throw ArgumentError("scene has no frame times");
  for (std::size_t k = 0; k < frame_times.size(); ++k) {
    check_time(frame_times[k]);
    if (k > 0 && !(frame_times[k] > frame_times[k - 1])) throw ArgumentError("frame times must increase");
  }
  for (std::size_t s = 0; s < sprites.size(); ++s) {
    const auto& sp = sprites[s];
    if (!(sp.intensity >= 0.0 && sp.intensity <= 1.0))
      throw ArgumentError("sprite " + std::to_string(s) + " intensity outside [0,1]");
    sp.trajectory.validate();
    const auto r = rasterize(sp.shape, sp.intensity, background);
    const double hx = 0.5 * double(r.coverage.cols() - 1);
    const double hy = 0.5 * double(r.coverage.rows() - 1);
    for (double t : frame_times) {
      const auto p = sp.trajectory.position(t);
      if (std::floor(p.x() - hx) < 1 || std::ceil(p.x() + hx) > width - 2 || std::floor(p.y() - hy) < 1 ||
          std::ceil(p.y() + hy) > height - 2)
        throw ArgumentError("sprite " + std::to_string(s) + " touches the border at t=" + std::to_string(t));
    }
  }
}

Plane<double> sprite_coverage(const SceneSpec& scene, std::size_t sprite, double t) {
  check_time(t);
  const auto& sp = scene.sprites.at(sprite);
  const auto p = sp.trajectory.position(t);
  return splat(rasterize(sp.shape, sp.intensity, scene.background), p.x(), p.y(), scene.width, scene.height)
      .alpha;
}

Frame render_frame(const SceneSpec& scene, double t) {
  check_time(t);
  if (scene.width < 1 || scene.height < 1) throw ArgumentError("scene has no pixels");
  Frame out = Frame::Constant(scene.height, scene.width, scene.background);
  for (const auto& sp : scene.sprites) {
    const auto p = sp.trajectory.position(t);
    auto layer = splat(rasterize(sp.shape, sp.intensity, scene.background), p.x(), p.y(), scene.width,
                       scene.height);
    const Plane<double> scale = layer.alpha.max(1.0).inverse();
    const Plane<double> a = layer.alpha * scale;
    out = out * (1.0 - a) + layer.premult * scale;
  }
  return out.cwiseMax(0.0).cwiseMin(1.0);
}

FlowField ground_truth_flow(const SceneSpec& scene, double t_a, double t_b) {
  check_time(t_a);
  check_time(t_b);
  FlowField flow(scene.width, scene.height);
  if (t_a == t_b) return flow;
  for (std::size_t s = 0; s < scene.sprites.size(); ++s) {
    const auto& traj = scene.sprites[s].trajectory;
    const Eigen::Vector2d d = traj.position(t_b) - traj.position(t_a);
    const auto cov = sprite_coverage(scene, s, t_a);
    flow.u = (cov >= 0.5).select(d.x(), flow.u);
    flow.v = (cov >= 0.5).select(d.y(), flow.v);
  }
  return flow;
}

}  // namespace evfi

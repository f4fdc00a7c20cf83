#pragma once

#include "evfi/errors.hpp"
#include "evfi/types.hpp"

#include <algorithm>
#include <cmath>

namespace evfi {

template <typename Scalar>
struct WarpResult {
  FrameT<Scalar> frame;
  Mask holes;
};

/// Backward warp: out(x, y) samples src bilinearly at (x + u, y + v).
/// Sample coordinates are clamped to the image; a pixel is a hole when its
/// bilinear footprint lies entirely outside the image.
template <typename Scalar>
WarpResult<Scalar> backward_warp(const FrameT<Scalar>& src, const FlowFieldT<Scalar>& flow) {
  if (!same_shape(src, flow.u) || !same_shape(src, flow.v)) throw ArgumentError("frame and flow dimensions differ");
  if (!flow.u.allFinite() || !flow.v.allFinite()) throw ArgumentError("flow contains non-finite values");
  const auto h = src.rows();
  const auto w = src.cols();
  WarpResult<Scalar> out{FrameT<Scalar>(h, w), Mask::Constant(h, w, false)};
  const Scalar max_x = Scalar(w - 1);
  const Scalar max_y = Scalar(h - 1);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      const Scalar du = flow.u(y, x);
      const Scalar dv = flow.v(y, x);
      if (du == Scalar(0) && dv == Scalar(0)) {
        out.frame(y, x) = src(y, x);
        continue;
      }
      const Scalar sx = Scalar(x) + du;
      const Scalar sy = Scalar(y) + dv;
      out.holes(y, x) = sx <= Scalar(-1) || sy <= Scalar(-1) || sx >= Scalar(w) || sy >= Scalar(h);
      const Scalar cx = std::clamp(sx, Scalar(0), max_x);
      const Scalar cy = std::clamp(sy, Scalar(0), max_y);
      const auto x0 = Eigen::Index(std::floor(cx));
      const auto y0 = Eigen::Index(std::floor(cy));
      const auto x1 = std::min(x0 + 1, w - 1);
      const auto y1 = std::min(y0 + 1, h - 1);
      const Scalar fx = cx - Scalar(x0);
      const Scalar fy = cy - Scalar(y0);
      const Scalar top = (Scalar(1) - fx) * src(y0, x0) + fx * src(y0, x1);
      const Scalar bot = (Scalar(1) - fx) * src(y1, x0) + fx * src(y1, x1);
      out.frame(y, x) = (Scalar(1) - fy) * top + fy * bot;
    }
  }
  return out;
}

/// Fusion weights for the I0-warped estimate; the I1 weight is 1 - v0.
template <typename Scalar>
struct VisibilityMapT {
  Plane<Scalar> v0;

  Plane<Scalar> v1() const { return Scalar(1) - v0; }
};
using VisibilityMap = VisibilityMapT<double>;

/// 1 - tau by default; a hole on one side hands the pixel to the other side.
template <typename Scalar = double>
VisibilityMapT<Scalar> time_weighted_visibility(double tau, const Mask& hole0, const Mask& hole1) {
  if (!same_shape(hole0, hole1)) throw ArgumentError("hole mask dimensions differ");
  const Scalar base(1.0 - tau);
  Plane<Scalar> v0 = Plane<Scalar>::Constant(hole0.rows(), hole0.cols(), base);
  v0 = (hole0 && !hole1).select(Scalar(0), v0);
  v0 = (hole1 && !hole0).select(Scalar(1), v0);
  return {std::move(v0)};
}

/// v0 * from0 + (1 - v0) * from1, clamped to [0,1].
template <typename Scalar>
FrameT<Scalar> fuse(const FrameT<Scalar>& from0, const FrameT<Scalar>& from1, const VisibilityMapT<Scalar>& vis) {
  if (!same_shape(from0, from1) || !same_shape(from0, vis.v0)) throw ArgumentError("fusion inputs differ in size");
  FrameT<Scalar> out = (from0 == from1).select(from0, vis.v0 * from0 + (Scalar(1) - vis.v0) * from1);
  return out.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

}  // namespace evfi

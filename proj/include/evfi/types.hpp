#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace evfi {

/// Row-major dense grid; rows index y, columns index x.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Single-channel intensity image with values in [0,1].
template <typename Scalar>
using FrameT = Plane<Scalar>;

using Frame = FrameT<double>;
using Mask = Plane<bool>;
using CountPlane = Plane<std::int32_t>;

/// Dense displacement field in pixels: u horizontal, v vertical.
template <typename Scalar>
struct FlowFieldT {
  Plane<Scalar> u;
  Plane<Scalar> v;

  FlowFieldT() = default;
  FlowFieldT(Eigen::Index width, Eigen::Index height)
      : u(Plane<Scalar>::Zero(height, width)), v(Plane<Scalar>::Zero(height, width)) {}
  FlowFieldT(Plane<Scalar> u_, Plane<Scalar> v_) : u(std::move(u_)), v(std::move(v_)) {}

  Eigen::Index width() const { return u.cols(); }
  Eigen::Index height() const { return u.rows(); }

  static FlowFieldT constant(Eigen::Index width, Eigen::Index height, Scalar du, Scalar dv) {
    return {Plane<Scalar>::Constant(height, width, du), Plane<Scalar>::Constant(height, width, dv)};
  }

  template <typename Other>
  FlowFieldT<Other> cast() const {
    return {u.template cast<Other>(), v.template cast<Other>()};
  }
};

using FlowField = FlowFieldT<double>;

template <typename A, typename B>
bool same_shape(const Eigen::ArrayBase<A>& a, const Eigen::ArrayBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

}  // namespace evfi

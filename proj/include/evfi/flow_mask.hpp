#pragma once

#include "evfi/events.hpp"
#include "evfi/types.hpp"

namespace evfi {

/// Per-pixel, per-axis weights that split the bi-directional flows between
/// the periods (0, tau] and (tau, 1].
struct FlowMask {
  Plane<double> omega_0t_u;
  Plane<double> omega_0t_v;
  Plane<double> omega_1t_u;
  Plane<double> omega_1t_v;
  double tau = 0.5;

  Eigen::Index width() const { return omega_0t_u.cols(); }
  Eigen::Index height() const { return omega_0t_u.rows(); }
};

inline constexpr int kDefaultSmoothingRadius = 2;
inline constexpr double kMaskEpsilon = 1e-6;

/// Box sum over a (2r+1)^2 window, clipped at the borders.
Plane<double> box_sum(const Plane<double>& in, int radius);

/// Ratio of smoothed event counts before and after tau (both polarities).
/// Pixels without any smoothed events fall back to the linear weights.
FlowMask event_count_ratio_mask(const EventStream& stream, double tau, int smoothing_radius = kDefaultSmoothingRadius);

/// Fraction of each pixel's events attributed to the horizontal axis:
/// |dI/dx| / (|dI/dx| + |dI/dy| + eps) on the mean of the two frames.
Plane<double> axis_attribution(const Frame& i0, const Frame& i1);

/// Axis-separated count ratios: each event is split between u and v by
/// axis_attribution at its pixel before the per-axis ratio is taken.
FlowMask directional_mask(const EventStream& stream, const Frame& i0, const Frame& i1, double tau,
                          int smoothing_radius = kDefaultSmoothingRadius);

/// omega_0t = tau and omega_1t = 1 - tau everywhere.
FlowMask linear_mask(double tau, Eigen::Index width, Eigen::Index height);

}  // namespace evfi

#include "evfi/flow_mask.hpp"

#include "evfi/errors.hpp"

#include <algorithm>
#include <string>

namespace evfi {

namespace {

void check_tau(const EventStream& s, double tau) {
  if (!(tau > s.t_start && tau < s.t_end))
    throw ArgumentError("tau " + std::to_string(tau) + " not strictly inside the stream window");
}

// Writes omega = c_before / (c_before + c_after), falling back to tau where
// no events were seen.
void ratio(const Plane<double>& before, const Plane<double>& after, double tau, Plane<double>& omega_0t,
           Plane<double>& omega_1t) {
  const Plane<double> total = before + after;
  omega_0t = (total > 0.0).select(before / total, tau);
  omega_1t = (total > 0.0).select(after / total, 1.0 - tau);
}

// Maps an absolute tau inside the stream window to the unit interval.
double unit_tau(const EventStream& s, double tau) { return (tau - s.t_start) / (s.t_end - s.t_start); }

}  // namespace

Plane<double> box_sum(const Plane<double>& in, int radius) {
  if (radius < 0) throw ArgumentError("smoothing radius must be nonnegative");
  if (radius == 0) return in;
  const auto h = in.rows();
  const auto w = in.cols();
  Plane<double> rows(h, w);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x) {
      const auto x0 = std::max<Eigen::Index>(0, x - radius);
      const auto x1 = std::min<Eigen::Index>(w - 1, x + radius);
      rows(y, x) = in.row(y).segment(x0, x1 - x0 + 1).sum();
    }
  Plane<double> out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    const auto y0 = std::max<Eigen::Index>(0, y - radius);
    const auto y1 = std::min<Eigen::Index>(h - 1, y + radius);
    out.row(y) = rows.middleRows(y0, y1 - y0 + 1).colwise().sum();
  }
  return out;
}

FlowMask event_count_ratio_mask(const EventStream& stream, double tau, int smoothing_radius) {
  check_tau(stream, tau);
  const Plane<double> before = count_map(stream, stream.t_start, tau).total().cast<double>();
  const Plane<double> after = count_map(stream, tau, stream.t_end).total().cast<double>();
  FlowMask m;
  m.tau = unit_tau(stream, tau);
  ratio(box_sum(before, smoothing_radius), box_sum(after, smoothing_radius), m.tau, m.omega_0t_u, m.omega_1t_u);
  m.omega_0t_v = m.omega_0t_u;
  m.omega_1t_v = m.omega_1t_u;
  return m;
}

Plane<double> axis_attribution(const Frame& i0, const Frame& i1) {
  if (!same_shape(i0, i1)) throw ArgumentError("frame dimensions differ");
  const Plane<double> mean = 0.5 * (i0 + i1);
  const auto h = mean.rows();
  const auto w = mean.cols();
  Plane<double> out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    const auto yu = std::max<Eigen::Index>(0, y - 1);
    const auto yd = std::min<Eigen::Index>(h - 1, y + 1);
    for (Eigen::Index x = 0; x < w; ++x) {
      const auto xl = std::max<Eigen::Index>(0, x - 1);
      const auto xr = std::min<Eigen::Index>(w - 1, x + 1);
      const double gx = std::abs(0.5 * (mean(y, xr) - mean(y, xl)));
      const double gy = std::abs(0.5 * (mean(yd, x) - mean(yu, x)));
      out(y, x) = gx / (gx + gy + kMaskEpsilon);
    }
  }
  return out;
}

FlowMask directional_mask(const EventStream& stream, const Frame& i0, const Frame& i1, double tau,
                          int smoothing_radius) {
  check_tau(stream, tau);
  if (i0.rows() != stream.height || i0.cols() != stream.width || !same_shape(i0, i1))
    throw ArgumentError("frame and stream dimensions differ");
  const Plane<double> wu = axis_attribution(i0, i1);
  const Plane<double> wv = 1.0 - wu;
  const Plane<double> before = count_map(stream, stream.t_start, tau).total().cast<double>();
  const Plane<double> after = count_map(stream, tau, stream.t_end).total().cast<double>();
  FlowMask m;
  m.tau = unit_tau(stream, tau);
  ratio(box_sum(wu * before, smoothing_radius), box_sum(wu * after, smoothing_radius), m.tau, m.omega_0t_u,
        m.omega_1t_u);
  ratio(box_sum(wv * before, smoothing_radius), box_sum(wv * after, smoothing_radius), m.tau, m.omega_0t_v,
        m.omega_1t_v);
  return m;
}

FlowMask linear_mask(double tau, Eigen::Index width, Eigen::Index height) {
  if (!(tau > 0.0 && tau < 1.0)) throw ArgumentError("tau must lie in (0,1)");
  FlowMask m;
  m.tau = tau;
  m.omega_0t_u = Plane<double>::Constant(height, width, tau);
  m.omega_0t_v = m.omega_0t_u;
  m.omega_1t_u = Plane<double>::Constant(height, width, 1.0 - tau);
  m.omega_1t_v = m.omega_1t_u;
  return m;
}

}  // namespace evfi

#include "evfi/pipeline.hpp"

#include "evfi/errors.hpp"

#include <algorithm>
#include <string>

namespace evfi {

MaskMode parse_mask_mode(std::string_view name) {
  if (name == "linear") return MaskMode::linear;
  if (name == "scalar_event") return MaskMode::scalar_event;
  if (name == "directional_event") return MaskMode::directional_event;
  throw LookupError("unknown mask mode '" + std::string(name) + "'");
}

std::string_view to_string(MaskMode mode) {
  switch (mode) {
    case MaskMode::linear:
      return "linear";
    case MaskMode::scalar_event:
      return "scalar_event";
    case MaskMode::directional_event:
      return "directional_event";
  }
  return "?";
}

FlowMask make_mask(MaskMode mode, const EventStream& events, const Frame& i0, const Frame& i1, double tau,
                   int smoothing_radius) {
  switch (mode) {
    case MaskMode::linear:
      return linear_mask(tau, i0.cols(), i0.rows());
    case MaskMode::scalar_event:
      return event_count_ratio_mask(events, tau, smoothing_radius);
    case MaskMode::directional_event:
      return directional_mask(events, i0, i1, tau, smoothing_radius);
  }
  throw LookupError("unknown mask mode");
}

Interpolation interpolate(const Frame& i0, const Frame& i1, const FlowField& f01, const FlowField& f10,
                          const EventStream& events, double tau, const InterpolationOptions& opts) {
  if (!same_shape(i0, i1)) throw ArgumentError("input frames differ in size");
  if (!(tau > 0.0 && tau < 1.0)) throw ArgumentError("tau must lie in (0,1)");
  Interpolation r;
  r.mask = make_mask(opts.mode, events, i0, i1, tau, opts.smoothing_radius);
  r.flows = intermediate_flows(f01, f10, r.mask, opts.synthesis);
  r.from0 = backward_warp(i0, r.flows.to0);
  r.from1 = backward_warp(i1, r.flows.to1);
  r.visibility = time_weighted_visibility(tau, r.from0.holes, r.from1.holes);
  r.frame = fuse(r.from0.frame, r.from1.frame, r.visibility);
  return r;
}

std::vector<TimedFrame> sample_scene(const SceneSpec& scene, int substeps, double t_start, double t_end) {
  if (substeps < 1) throw ArgumentError("substeps must be positive");
  if (!(t_start < t_end)) throw ArgumentError("empty sampling window");
  std::vector<double> keys;
  keys.push_back(t_start);
  for (double t : scene.frame_times)
    if (t > t_start && t < t_end) keys.push_back(t);
  keys.push_back(t_end);
  std::vector<TimedFrame> out;
  for (std::size_t k = 0; k + 1 < keys.size(); ++k) {
    for (int j = 0; j < substeps; ++j) {
      const double t = keys[k] + (keys[k + 1] - keys[k]) * double(j) / double(substeps);
      out.emplace_back(t, render_frame(scene, t));
    }
  }
  out.emplace_back(t_end, render_frame(scene, t_end));
  return out;
}

EventStream simulate_scene(const SceneSpec& scene, int substeps, const SimulatorOptions& opts) {
  return simulate_events(sample_scene(scene, substeps), opts);
}

std::vector<double> skip_taus(int skips) {
  if (skips < 1) throw ArgumentError("need at least one skipped frame");
  std::vector<double> taus;
  for (int k = 1; k <= skips; ++k) taus.push_back(double(k) / double(skips + 1));
  return taus;
}

}  // namespace evfi

#pragma once

#include "evfi/events.hpp"
#include "evfi/flow_mask.hpp"
#include "evfi/flow_synth.hpp"
#include "evfi/scene.hpp"
#include "evfi/warp.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace evfi {

enum class MaskMode { linear, scalar_event, directional_event };

MaskMode parse_mask_mode(std::string_view name);
std::string_view to_string(MaskMode mode);

struct InterpolationOptions {
  MaskMode mode = MaskMode::directional_event;
  int smoothing_radius = kDefaultSmoothingRadius;
  SynthesisMode synthesis = SynthesisMode::weighted;
};

/// Every intermediate product of one interpolated frame.
struct Interpolation {
  FlowMask mask;
  IntermediateFlows flows;
  WarpResult<double> from0;
  WarpResult<double> from1;
  VisibilityMap visibility;
  Frame frame;
};

FlowMask make_mask(MaskMode mode, const EventStream& events, const Frame& i0, const Frame& i1, double tau,
                   int smoothing_radius);

/// mask -> intermediate flows -> backward warps -> visibility -> fusion.
Interpolation interpolate(const Frame& i0, const Frame& i1, const FlowField& f01, const FlowField& f10,
                          const EventStream& events, double tau, const InterpolationOptions& opts = {});

/// Renders the scene at its frame times with `substeps` uniform subdivisions
/// between consecutive frame times.
std::vector<TimedFrame> sample_scene(const SceneSpec& scene, int substeps, double t_start = 0.0, double t_end = 1.0);

EventStream simulate_scene(const SceneSpec& scene, int substeps = kDefaultSubsteps,
                           const SimulatorOptions& opts = {});

/// Interior times k/(skips+1), k = 1..skips.
std::vector<double> skip_taus(int skips = 7);

}  // namespace evfi

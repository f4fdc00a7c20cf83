#pragma once

#include "evfi/io.hpp"
#include "evfi/metrics.hpp"
#include "evfi/pipeline.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evfi {

/// Where the two input flows come from.
struct FlowInput {
  bool oracle = true;
  std::string f01_path;
  std::string f10_path;
};

/// "oracle" or "f01.flo,f10.flo".
FlowInput parse_flow_input(std::string_view text);

/// Comma-separated list of times, e.g. "0.125,0.25".
std::vector<double> parse_taus(std::string_view text);

struct RunConfig {
  std::string scene;  // preset name or scene file; empty when frames come from files
  std::string i0_path;
  std::string i1_path;
  std::string events_path;
  FlowInput flows;
  double contrast_threshold = kDefaultContrastThreshold;
  int substeps = kDefaultSubsteps;
  std::vector<double> taus = skip_taus(7);
  MaskMode mode = MaskMode::directional_event;
  int smoothing_radius = kDefaultSmoothingRadius;
  double blur_sigma = kDefaultBlurSigma;
  std::string out_dir = "out";
  std::string frame_ext = "pgm";
  bool write_masks = false;

  /// Throws ArgumentError naming the first broken invariant.
  void validate() const;

  /// Sets one field from its config-file key. Unknown keys throw ArgumentError.
  void set(std::string_view key, std::string_view value);
};

/// key=value lines, '#' comments, blank lines ignored.
void apply_config(RunConfig& cfg, std::istream& in);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Preset name or path to a scene file.
SceneSpec load_scene(const std::string& name_or_path);

/// Maps event times onto the unit window [0,1].
EventStream to_unit_window(const EventStream& stream);

struct RunReport {
  std::vector<MetricsRecord> metrics;  // empty without an oracle scene
  std::vector<std::string> written;
};

EventStream run_simulate(const std::string& scene, double contrast_threshold, int substeps, const std::string& out);

/// Interpolates every tau in order, writing frame_NN.<ext> into out_dir (and
/// the oracle frames into out_dir/gt plus metrics.csv when a scene is given).
RunReport run_interpolate(const RunConfig& cfg);

/// Pairs frames by file name across the two directories.
std::vector<MetricsRecord> run_evaluate(const std::string& pred_dir, const std::string& gt_dir,
                                        const std::string& report);

/// Normalized displacement and cumulative event count of a preset, sampled
/// at `samples` + 1 uniform times over [0,1].
struct MotionCurves {
  std::vector<double> t;
  std::vector<double> displacement;
  std::vector<double> events;

  double sup_gap() const;
  double correlation() const;
};

MotionCurves motion_curves(const SceneSpec& scene, int samples = 256, int substeps = kDefaultSubsteps);

/// Text report for butterfly1d, butterfly2d or curves.
std::string run_toy(std::string_view name);

}  // namespace evfi

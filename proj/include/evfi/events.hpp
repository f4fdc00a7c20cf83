#pragma once

#include "evfi/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace evfi {

struct Event {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  double t = 0.0;
  std::int8_t polarity = 1;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Canonical event order: time, then row, column, polarity.
bool event_before(const Event& a, const Event& b);

struct EventStream {
  int width = 0;
  int height = 0;
  double t_start = 0.0;
  double t_end = 1.0;
  std::vector<Event> events;

  /// Throws ValidationError naming the first offending record.
  void validate() const;
  void sort();
};

/// Per-pixel positive/negative counts over the half-open window (t_a, t_b].
struct CountMaps {
  CountPlane pos;
  CountPlane neg;
  double t_a = 0.0;
  double t_b = 1.0;

  CountPlane total() const { return pos + neg; }
};

/// Four-channel event frame. Timestamps are normalized to the window and
/// hold -1 where the matching count is zero.
struct EventTensor {
  CountPlane pos_count;
  CountPlane neg_count;
  Plane<double> last_pos_t;
  Plane<double> last_neg_t;
};

inline constexpr double kDefaultContrastThreshold = 0.15;
inline constexpr double kDefaultLogFloor = 1.0 / 255.0;
inline constexpr int kDefaultSubsteps = 32;

struct SimulatorOptions {
  double contrast_threshold = kDefaultContrastThreshold;
  double floor = kDefaultLogFloor;
  /// Relative per-pixel threshold jitter (0.1 means uniform +-10%). Off by default.
  double threshold_jitter = 0.0;
  std::uint64_t seed = 0;
};

using TimedFrame = std::pair<double, Frame>;

/// Contrast-threshold event generation. Log intensity is linearly
/// interpolated between samples; an event fires at the exact time the log
/// intensity has moved one threshold away from the last event's level.
EventStream simulate_events(const std::vector<TimedFrame>& frames, const SimulatorOptions& opts = {});
EventStream simulate_events(const std::vector<TimedFrame>& frames, double contrast_threshold, double floor);

CountMaps count_map(const EventStream& stream, double t_a, double t_b);

EventTensor to_event_tensor(const EventStream& stream, double t_a, double t_b);

/// exp(log(max(i0, floor)) + C * (pos - neg)) with no clamping applied.
Frame integrate_events_log(const Frame& i0, const EventStream& stream, double contrast_threshold, double floor);

/// integrate_events_log clamped to [0,1].
Frame integrate_events(const Frame& i0, const EventStream& stream, double contrast_threshold, double floor);

/// Number of events with t <= each query time, over the whole frame.
std::vector<std::int64_t> cumulative_counts(const EventStream& stream, const std::vector<double>& times);

/// Events inside (t_a, t_b], as a stream whose window is (t_a, t_b].
EventStream slice(const EventStream& stream, double t_a, double t_b);

}  // namespace evfi

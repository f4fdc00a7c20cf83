#include "evfi/events.hpp"

#include "evfi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <tuple>

namespace evfi {

namespace {

void check_window(const EventStream& s, double t_a, double t_b) {
  if (!(t_a < t_b)) throw ArgumentError("inverted window (" + std::to_string(t_a) + ", " + std::to_string(t_b) + "]");
  if (t_a < s.t_start || t_b > s.t_end) throw ArgumentError("window outside the stream span");
}

Plane<double> log_frame(const Frame& f, double floor) { return f.cwiseMax(floor).log(); }

}  // namespace

bool event_before(const Event& a, const Event& b) {
  return std::tie(a.t, a.y, a.x, a.polarity) < std::tie(b.t, b.y, b.x, b.polarity);
}

void EventStream::validate() const {
  if (width < 1 || height < 1 || width > 65535 || height > 65535) throw ValidationError("bad stream dimensions");
  if (!(t_start < t_end)) throw ValidationError("stream window is empty");
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    const auto where = "event " + std::to_string(k) + ": ";
    if (e.x >= width) throw ValidationError(where + "x=" + std::to_string(e.x) + " outside width");
    if (e.y >= height) throw ValidationError(where + "y=" + std::to_string(e.y) + " outside height");
    if (e.polarity != 1 && e.polarity != -1) throw ValidationError(where + "polarity must be +1 or -1");
    if (!(e.t >= t_start && e.t <= t_end)) throw ValidationError(where + "timestamp outside stream window");
    if (k > 0 && event_before(e, events[k - 1])) throw ValidationError(where + "out of order");
  }
}

void EventStream::sort() { std::sort(events.begin(), events.end(), event_before); }

EventStream simulate_events(const std::vector<TimedFrame>& frames, const SimulatorOptions& opts) {
  if (frames.size() < 2) throw ArgumentError("need at least two frames");
  if (!(opts.contrast_threshold > 0)) throw ArgumentError("contrast threshold must be positive");
  if (!(opts.floor > 0)) throw ArgumentError("log floor must be positive");
  if (opts.threshold_jitter < 0 || opts.threshold_jitter >= 1) throw ArgumentError("jitter must be in [0,1)");
  const auto h = frames.front().second.rows();
  const auto w = frames.front().second.cols();
  if (w > 65535 || h > 65535) throw ArgumentError("frame too large for 16-bit coordinates");
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (frames[k].second.rows() != h || frames[k].second.cols() != w)
      throw ArgumentError("frame " + std::to_string(k) + " has mismatched dimensions");
    if (k > 0 && !(frames[k].first > frames[k - 1].first))
      throw ArgumentError("frame times must be strictly increasing");
  }

  Plane<double> threshold = Plane<double>::Constant(h, w, opts.contrast_threshold);
  if (opts.threshold_jitter > 0) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-opts.threshold_jitter, opts.threshold_jitter);
    for (Eigen::Index i = 0; i < threshold.size(); ++i) threshold(i) *= 1.0 + jitter(rng);
  }

  EventStream out;
  out.width = int(w);
  out.height = int(h);
  out.t_start = frames.front().first;
  out.t_end = frames.back().first;

  const Plane<double> base = log_frame(frames.front().second, opts.floor);
  Plane<double> prev = Plane<double>::Zero(h, w);  // log change since the first frame
  Plane<std::int64_t> level = Plane<std::int64_t>::Zero(h, w);

  for (std::size_t k = 1; k < frames.size(); ++k) {
    const double ta = frames[k - 1].first;
    const double tb = frames[k].first;
    const Plane<double> cur = log_frame(frames[k].second, opts.floor) - base;
    for (Eigen::Index y = 0; y < h; ++y) {
      for (Eigen::Index x = 0; x < w; ++x) {
        const double da = prev(y, x);
        const double db = cur(y, x);
        if (db == da) continue;
        const double c = threshold(y, x);
        auto& lv = level(y, x);
        const int step = db > da ? 1 : -1;
        while (step > 0 ? db >= double(lv + 1) * c : db <= double(lv - 1) * c) {
          lv += step;
          const double frac = (double(lv) * c - da) / (db - da);
          const double t = std::clamp(ta + frac * (tb - ta), ta, tb);
          out.events.push_back({std::uint16_t(x), std::uint16_t(y), t, std::int8_t(step)});
        }
      }
    }
    prev = cur;
  }
  out.sort();
  return out;
}

EventStream simulate_events(const std::vector<TimedFrame>& frames, double contrast_threshold, double floor) {
  SimulatorOptions opts;
  opts.contrast_threshold = contrast_threshold;
  opts.floor = floor;
  return simulate_events(frames, opts);
}

CountMaps count_map(const EventStream& stream, double t_a, double t_b) {
  check_window(stream, t_a, t_b);
  CountMaps m{CountPlane::Zero(stream.height, stream.width), CountPlane::Zero(stream.height, stream.width), t_a,
              t_b};
  for (const auto& e : stream.events) {
    if (e.t <= t_a || e.t > t_b) continue;
    (e.polarity > 0 ? m.pos : m.neg)(e.y, e.x) += 1;
  }
  return m;
}

EventTensor to_event_tensor(const EventStream& stream, double t_a, double t_b) {
  check_window(stream, t_a, t_b);
  const auto h = stream.height;
  const auto w = stream.width;
  EventTensor et{CountPlane::Zero(h, w), CountPlane::Zero(h, w), Plane<double>::Constant(h, w, -1.0),
                 Plane<double>::Constant(h, w, -1.0)};
  const double span = t_b - t_a;
  for (const auto& e : stream.events) {
    if (e.t <= t_a || e.t > t_b) continue;
    const double tn = (e.t - t_a) / span;
    if (e.polarity > 0) {
      et.pos_count(e.y, e.x) += 1;
      et.last_pos_t(e.y, e.x) = std::max(et.last_pos_t(e.y, e.x), tn);
    } else {
      et.neg_count(e.y, e.x) += 1;
      et.last_neg_t(e.y, e.x) = std::max(et.last_neg_t(e.y, e.x), tn);
    }
  }
  return et;
}

Frame integrate_events_log(const Frame& i0, const EventStream& stream, double contrast_threshold, double floor) {
  if (i0.rows() != stream.height || i0.cols() != stream.width)
    throw ArgumentError("frame and stream dimensions differ");
  Plane<double> net = Plane<double>::Zero(stream.height, stream.width);
  for (const auto& e : stream.events) net(e.y, e.x) += e.polarity;
  return (log_frame(i0, floor) + contrast_threshold * net).exp();
}

Frame integrate_events(const Frame& i0, const EventStream& stream, double contrast_threshold, double floor) {
  return integrate_events_log(i0, stream, contrast_threshold, floor).cwiseMin(1.0).cwiseMax(0.0);
}

std::vector<std::int64_t> cumulative_counts(const EventStream& stream, const std::vector<double>& times) {
  std::vector<double> ts;
  ts.reserve(stream.events.size());
  for (const auto& e : stream.events) ts.push_back(e.t);
  if (!std::is_sorted(ts.begin(), ts.end())) std::sort(ts.begin(), ts.end());
  std::vector<std::int64_t> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  return out;
}

EventStream slice(const EventStream& stream, double t_a, double t_b) {
  check_window(stream, t_a, t_b);
  EventStream out{stream.width, stream.height, t_a, t_b, {}};
  for (const auto& e : stream.events)
    if (e.t > t_a && e.t <= t_b) out.events.push_back(e);
  return out;
}

}  // namespace evfi

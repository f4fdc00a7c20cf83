#include "evfi/run.hpp"

#include "evfi/errors.hpp"
#include "evfi/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fs = std::filesystem;

namespace evfi {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T number(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size())
    throw ArgumentError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  return v;
}

bool boolean(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw ArgumentError(std::string(key) + ": expected true or false");
}

std::string frame_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%02zu", k + 1);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

}  // namespace

FlowInput parse_flow_input(std::string_view text) {
  text = trim(text);
  if (text == "oracle") return {};
  const auto comma = text.find(',');
  if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
    throw ArgumentError("flows: expected 'oracle' or 'f01.flo,f10.flo'");
  FlowInput f;
  f.oracle = false;
  f.f01_path = std::string(trim(text.substr(0, comma)));
  f.f10_path = std::string(trim(text.substr(comma + 1)));
  if (f.f01_path.empty() || f.f10_path.empty()) throw ArgumentError("flows: empty flow file name");
  return f;
}

std::vector<double> parse_taus(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto k = text.find(',', start);
    if (k == std::string_view::npos) k = text.size();
    out.push_back(number<double>("taus", text.substr(start, k - start)));
    start = k + 1;
  }
  return out;
}

void RunConfig::validate() const {
  if (taus.empty()) throw ArgumentError("taus: need at least one interpolation time");
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!(taus[k] > 0.0 && taus[k] < 1.0)) throw ArgumentError("taus: every value must lie strictly inside (0,1)");
    if (k > 0 && !(taus[k] > taus[k - 1])) throw ArgumentError("taus: values must be strictly increasing");
  }
  if (!(contrast_threshold > 0.0)) throw ArgumentError("threshold: must be positive");
  if (substeps < 1) throw ArgumentError("substeps: must be at least 1");
  if (smoothing_radius < 0) throw ArgumentError("smoothing_radius: must be nonnegative");
  if (!(blur_sigma >= 0.0)) throw ArgumentError("blur_sigma: must be nonnegative");
  if (frame_ext != "pgm" && frame_ext != "png") throw ArgumentError("frame_ext: use pgm or png");
  if (out_dir.empty()) throw ArgumentError("out: output directory is required");
  if (i0_path.empty() != i1_path.empty()) throw ArgumentError("i0/i1: give both input frames or neither");
  if (scene.empty()) {
    if (i0_path.empty()) throw ArgumentError("need a scene or both input frames");
    if (flows.oracle) throw ArgumentError("flows: oracle flows need a scene");
    if (mode != MaskMode::linear && events_path.empty())
      throw ArgumentError("events: " + std::string(to_string(mode)) + " needs an event file or a scene");
  }
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto v = std::string(trim(value));
  if (key == "scene") {
    scene = v;
  } else if (key == "i0") {
    i0_path = v;
  } else if (key == "i1") {
    i1_path = v;
  } else if (key == "events") {
    events_path = v;
  } else if (key == "flows") {
    flows = parse_flow_input(v);
  } else if (key == "threshold") {
    contrast_threshold = number<double>(key, v);
  } else if (key == "substeps") {
    substeps = number<int>(key, v);
  } else if (key == "taus") {
    taus = parse_taus(v);
  } else if (key == "mode") {
    mode = parse_mask_mode(v);
  } else if (key == "smoothing_radius") {
    smoothing_radius = number<int>(key, v);
  } else if (key == "blur_sigma") {
    blur_sigma = number<double>(key, v);
  } else if (key == "out") {
    out_dir = v;
  } else if (key == "frame_ext") {
    frame_ext = v;
  } else if (key == "write_masks") {
    write_masks = boolean(key, v);
  } else {
    throw ArgumentError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config(RunConfig& cfg, std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ArgumentError("config line " + std::to_string(line) + ": expected key=value");
    try {
      cfg.set(trim(text.substr(0, eq)), text.substr(eq + 1));
    } catch (const ArgumentError& e) {
      throw ArgumentError("config line " + std::to_string(line) + ": " + e.what());
    } catch (const LookupError& e) {
      throw ArgumentError("config line " + std::to_string(line) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  apply_config(cfg, in);
}

SceneSpec load_scene(const std::string& name_or_path) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return make_preset(name_or_path);
  if (!fs::exists(name_or_path))
    throw LookupError("'" + name_or_path + "' is neither a preset nor an existing scene file");
  return load_scene_file(name_or_path);
}

EventStream to_unit_window(const EventStream& stream) {
  if (stream.t_start == 0.0 && stream.t_end == 1.0) return stream;
  EventStream out = stream;
  const double span = stream.t_end - stream.t_start;
  out.t_start = 0.0;
  out.t_end = 1.0;
  for (auto& e : out.events) e.t = std::clamp((e.t - stream.t_start) / span, 0.0, 1.0);
  return out;
}

EventStream run_simulate(const std::string& scene, double contrast_threshold, int substeps, const std::string& out) {
  SimulatorOptions opts;
  opts.contrast_threshold = contrast_threshold;
  auto stream = simulate_scene(load_scene(scene), substeps, opts);
  write_events(stream, out);
  return stream;
}

RunReport run_interpolate(const RunConfig& cfg) {
  cfg.validate();
  std::optional<SceneSpec> scene;
  if (!cfg.scene.empty()) scene = load_scene(cfg.scene);

  const Frame i0 = cfg.i0_path.empty() ? render_frame(*scene, 0.0) : read_frame(cfg.i0_path);
  const Frame i1 = cfg.i1_path.empty() ? render_frame(*scene, 1.0) : read_frame(cfg.i1_path);
  if (!same_shape(i0, i1)) throw ArgumentError("i0 and i1 differ in size");
  if (scene && (i0.cols() != scene->width || i0.rows() != scene->height))
    throw ArgumentError("input frames do not match the scene dimensions");

  EventStream events;
  if (!cfg.events_path.empty()) {
    events = to_unit_window(read_events(cfg.events_path));
  } else if (scene) {
    SimulatorOptions opts;
    opts.contrast_threshold = cfg.contrast_threshold;
    events = simulate_scene(*scene, cfg.substeps, opts);
  } else {
    events = EventStream{int(i0.cols()), int(i0.rows()), 0.0, 1.0, {}};
  }
  if (events.width != i0.cols() || events.height != i0.rows())
    throw ArgumentError("event stream dimensions do not match the frames");

  FlowField f01, f10;
  if (cfg.flows.oracle) {
    f01 = ground_truth_flow(*scene, 0.0, 1.0);
    f10 = ground_truth_flow(*scene, 1.0, 0.0);
  } else {
    f01 = read_flo(cfg.flows.f01_path);
    f10 = read_flo(cfg.flows.f10_path);
  }
  if (f01.width() != i0.cols() || f01.height() != i0.rows() || f10.width() != i0.cols() || f10.height() != i0.rows())
    throw ArgumentError("flow dimensions do not match the frames");

  InterpolationOptions opts;
  opts.mode = cfg.mode;
  opts.smoothing_radius = cfg.smoothing_radius;

  RunReport report;
  ensure_dir(cfg.out_dir);
  const std::string gt_dir = cfg.out_dir + "/gt";
  if (scene) ensure_dir(gt_dir);
  for (std::size_t k = 0; k < cfg.taus.size(); ++k) {
    const double tau = cfg.taus[k];
    const auto name = frame_name(k);
    const auto r = interpolate(i0, i1, f01, f10, events, tau, opts);
    if (!r.frame.allFinite()) throw ValidationError(name + ": interpolated frame contains NaN or Inf");
    const auto path = cfg.out_dir + "/" + name + "." + cfg.frame_ext;
    write_frame(r.frame, path);
    report.written.push_back(path);
    if (cfg.write_masks) {
      const auto mpath = cfg.out_dir + "/" + name + ".msk";
      write_mask(r.mask, mpath);
      report.written.push_back(mpath);
    }
    if (!scene) continue;
    const Frame gt = render_frame(*scene, tau);
    const auto gpath = gt_dir + "/" + name + "." + cfg.frame_ext;
    write_frame(gt, gpath);
    report.written.push_back(gpath);
    MetricsRecord m{name, tau, psnr(r.frame, gt), ssim(r.frame, gt), interpolation_error(r.frame, gt), std::nullopt};
    m.mc_loss = motion_consistency_loss(r.frame, i0, r.frame, i1, to_event_tensor(events, 0.0, tau),
                                        to_event_tensor(events, tau, 1.0), cfg.blur_sigma);
    report.metrics.push_back(m);
  }
  if (scene) {
    const auto mpath = cfg.out_dir + "/metrics.csv";
    write_metrics_csv(report.metrics, mpath);
    report.written.push_back(mpath);
  }
  return report;
}

std::vector<MetricsRecord> run_evaluate(const std::string& pred_dir, const std::string& gt_dir,
                                        const std::string& report) {
  if (!fs::is_directory(pred_dir)) throw IoError("not a directory: " + pred_dir);
  if (!fs::is_directory(gt_dir)) throw IoError("not a directory: " + gt_dir);
  std::vector<fs::path> preds;
  for (const auto& entry : fs::directory_iterator(pred_dir)) {
    const auto ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".pgm" || ext == ".png")) preds.push_back(entry.path());
  }
  std::sort(preds.begin(), preds.end());
  if (preds.empty()) throw IoError("no .pgm or .png frames in " + pred_dir);
  std::vector<MetricsRecord> out;
  for (const auto& p : preds) {
    const auto g = fs::path(gt_dir) / p.filename();
    if (!fs::exists(g)) throw IoError("missing ground truth " + g.string());
    const Frame a = read_frame(p.string());
    const Frame b = read_frame(g.string());
    if (!same_shape(a, b)) throw ArgumentError("size mismatch for " + p.filename().string());
    out.push_back({p.stem().string(), std::nullopt, psnr(a, b), ssim(a, b), interpolation_error(a, b), std::nullopt});
  }
  write_metrics_csv(out, report);
  return out;
}

double MotionCurves::sup_gap() const {
  double g = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) g = std::max(g, std::abs(displacement[k] - events[k]));
  return g;
}

double MotionCurves::correlation() const {
  const double n = double(t.size());
  const double ma = std::accumulate(displacement.begin(), displacement.end(), 0.0) / n;
  const double mb = std::accumulate(events.begin(), events.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double a = displacement[k] - ma;
    const double b = events[k] - mb;
    sab += a * b;
    saa += a * a;
    sbb += b * b;
  }
  return sab / std::sqrt(saa * sbb);
}

MotionCurves motion_curves(const SceneSpec& scene, int samples, int substeps) {
  if (samples < 1) throw ArgumentError("need at least one curve sample");
  if (scene.sprites.empty()) throw ArgumentError("curves need a moving sprite");
  const auto stream = simulate_scene(scene, substeps);
  if (stream.events.empty()) throw ArgumentError("scene produced no events");
  const auto& traj = scene.sprites.front().trajectory;
  const Eigen::Vector2d p0 = traj.position(0.0);
  const double total = (traj.position(1.0) - p0).norm();
  if (!(total > 0.0)) throw ArgumentError("first sprite does not move");
  MotionCurves c;
  for (int k = 0; k <= samples; ++k) c.t.push_back(double(k) / samples);
  const auto counts = cumulative_counts(stream, c.t);
  for (int k = 0; k <= samples; ++k) {
    c.displacement.push_back((traj.position(c.t[k]) - p0).norm() / total);
    c.events.push_back(double(counts[k]) / double(counts.back()));
  }
  return c;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

void describe_window(std::ostream& out, const EventStream& s, double a, double b) {
  const auto cm = count_map(s, a, b);
  out << "events in (" << a << "," << b << "]: ";
  const int pos = cm.pos.sum();
  const int neg = cm.neg.sum();
  if (pos + neg == 0) {
    out << "none\n";
    return;
  }
  const auto active = (cm.total() > 0).count();
  out << pos << " positive, " << neg << " negative at " << active << " pixels\n";
  if (active > 12) return;
  for (Eigen::Index y = 0; y < cm.pos.rows(); ++y)
    for (Eigen::Index x = 0; x < cm.pos.cols(); ++x)
      if (cm.pos(y, x) + cm.neg(y, x) > 0) {
        const int net = cm.pos(y, x) - cm.neg(y, x);
        out << "  (" << x << "," << y << ") +" << cm.pos(y, x) << " -" << cm.neg(y, x) << " sign "
            << (net > 0 ? "+1" : net < 0 ? "-1" : "0") << '\n';
      }
}

std::string butterfly_report(std::string_view name) {
  const auto scene = make_preset(name);
  const auto marks = butterfly_marks(name);
  const double tau = marks.tau;
  const auto stream = simulate_scene(scene);
  const Frame i0 = render_frame(scene, 0.0);
  const Frame i1 = render_frame(scene, 1.0);
  const auto f01 = ground_truth_flow(scene, 0.0, 1.0);
  const auto f10 = ground_truth_flow(scene, 1.0, 0.0);
  const Frame gt = render_frame(scene, tau);

  std::ostringstream out;
  out << name << ": " << scene.width << "x" << scene.height << ", tau " << tau << ", " << stream.events.size()
      << " events\n";
  describe_window(out, stream, 0.0, tau);
  describe_window(out, stream, tau, 1.0);

  const auto rx = Eigen::Index(std::lround(marks.rest.x()));
  const auto ry = Eigen::Index(std::lround(marks.rest.y()));
  const Eigen::Vector2d d(f01.u(ry, rx), f01.v(ry, rx));
  const auto active = count_map(stream, 0.0, 1.0).total();
  for (MaskMode mode : {MaskMode::linear, MaskMode::scalar_event, MaskMode::directional_event}) {
    InterpolationOptions opts;
    opts.mode = mode;
    const auto r = interpolate(i0, i1, f01, f10, stream, tau, opts);
    double w0 = 0.0, w1 = 0.0;
    int n = 0;
    for (Eigen::Index y = 0; y < active.rows(); ++y)
      for (Eigen::Index x = 0; x < active.cols(); ++x)
        if (active(y, x) > 0) {
          w0 += r.mask.omega_0t_u(y, x) + r.mask.omega_0t_v(y, x);
          w1 += r.mask.omega_1t_u(y, x) + r.mask.omega_1t_v(y, x);
          n += 2;
        }
    // Where the sprite point at Y0 lands: Y0 + omega_0t * F01 per axis.
    const Eigen::Vector2d at(marks.rest.x() + r.mask.omega_0t_u(ry, rx) * d.x(),
                             marks.rest.y() + r.mask.omega_0t_v(ry, rx) * d.y());
    const char* where = (at - marks.rest).norm() < 0.25       ? "rest position"
                        : (at - marks.midpoint).norm() < 0.25 ? "midpoint"
                        : (at - marks.arrival).norm() < 0.25  ? "arrival"
                                                              : "elsewhere";
    out << to_string(mode) << ": mean omega_0t " << fmt("%.3f", n ? w0 / n : tau) << ", omega_1t "
        << fmt("%.3f", n ? w1 / n : 1 - tau) << " at active pixels; sprite at (" << fmt("%.2f", at.x()) << ","
        << fmt("%.2f", at.y()) << ") " << where << "; psnr " << fmt("%.2f", psnr(r.frame, gt)) << " dB\n";
  }
  return out.str();
}

std::string curves_report() {
  std::ostringstream out;
  out << "preset,t,displacement,events\n";
  for (const char* name : {"uniform", "accelerated"}) {
    const auto c = motion_curves(make_preset(name));
    for (std::size_t k = 0; k < c.t.size(); ++k)
      out << name << ',' << fmt("%.6f", c.t[k]) << ',' << fmt("%.6f", c.displacement[k]) << ','
          << fmt("%.6f", c.events[k]) << '\n';
  }
  return out.str();
}

}  // namespace

std::string run_toy(std::string_view name) {
  if (name == "butterfly1d" || name == "butterfly2d") return butterfly_report(name);
  if (name == "curves") return curves_report();
  throw LookupError("unknown toy '" + std::string(name) + "' (butterfly1d, butterfly2d, curves)");
}

}  // namespace evfi

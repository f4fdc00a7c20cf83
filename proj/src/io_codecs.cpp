#include "byte_io.hpp"
#include "evfi/errors.hpp"
#include "evfi/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace evfi {

using detail::ByteReader;
using detail::ByteWriter;

// ---- .flo ----

FlowField decode_flo(std::span<const std::uint8_t> data) {
  ByteReader in(data, "flo");
  const float magic = in.get<float>("magic");
  if (magic != kFloMagic) throw FormatError("flo: bad magic", 0);
  const auto w = in.get<std::int32_t>("width");
  const auto h = in.get<std::int32_t>("height");
  if (w < 1 || h < 1 || std::int64_t(w) * h > (std::int64_t(1) << 28))
    throw FormatError("flo: implausible dimensions " + std::to_string(w) + "x" + std::to_string(h), 4);
  in.expect_exactly(std::size_t(w) * h * 8, "flow payload");
  FlowField f{Plane<double>(h, w), Plane<double>(h, w)};
  for (std::int32_t y = 0; y < h; ++y)
    for (std::int32_t x = 0; x < w; ++x) {
      f.u(y, x) = in.get<float>("u");
      f.v(y, x) = in.get<float>("v");
    }
  return f;
}

Bytes encode_flo(const FlowField& flow) {
  if (flow.u.rows() != flow.v.rows() || flow.u.cols() != flow.v.cols())
    throw ArgumentError("flow components differ in size");
  if (!flow.u.allFinite() || !flow.v.allFinite()) throw ValidationError("flo: flow contains NaN or Inf");
  ByteWriter out(12 + std::size_t(flow.u.size()) * 8);
  out.put(kFloMagic);
  out.put(std::int32_t(flow.width()));
  out.put(std::int32_t(flow.height()));
  for (Eigen::Index y = 0; y < flow.height(); ++y)
    for (Eigen::Index x = 0; x < flow.width(); ++x) {
      out.put(float(flow.u(y, x)));
      out.put(float(flow.v(y, x)));
    }
  return out.take();
}

FlowField read_flo(const std::string& path) { return decode_flo(read_file(path)); }
void write_flo(const FlowField& flow, const std::string& path) { write_file(path, encode_flo(flow)); }

// ---- events ----

namespace {

constexpr std::size_t kEvsHeader = 4 + 4 + 4 + 8 + 8 + 8;
constexpr std::size_t kEvsRecord = 2 + 2 + 8 + 1;

std::string lower(std::string s) {
  for (auto& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

EventFormat event_format_for(const std::string& path) {
  const auto p = lower(path);
  return p.size() >= 4 && p.compare(p.size() - 4, 4, ".csv") == 0 ? EventFormat::csv : EventFormat::binary;
}

EventStream decode_evs(std::span<const std::uint8_t> data) {
  ByteReader in(data, "evs");
  if (!in.match("EVS1", 4)) throw FormatError("evs: bad magic", 0);
  EventStream s;
  const auto w = in.get<std::uint32_t>("width");
  const auto h = in.get<std::uint32_t>("height");
  if (w < 1 || h < 1 || w > 65535 || h > 65535)
    throw FormatError("evs: bad dimensions " + std::to_string(w) + "x" + std::to_string(h), 4);
  s.width = int(w);
  s.height = int(h);
  s.t_start = in.get<double>("t_start");
  s.t_end = in.get<double>("t_end");
  const auto count = in.get<std::uint64_t>("count");
  if (count > in.remaining() / kEvsRecord) throw FormatError("evs: truncated event records", data.size());
  in.expect_exactly(count * kEvsRecord, "event records");
  s.events.resize(count);
  for (auto& e : s.events) {
    e.x = in.get<std::uint16_t>("x");
    e.y = in.get<std::uint16_t>("y");
    e.t = in.get<double>("t");
    e.polarity = in.get<std::int8_t>("polarity");
  }
  s.validate();
  return s;
}

Bytes encode_evs(const EventStream& stream) {
  stream.validate();
  ByteWriter out(kEvsHeader + stream.events.size() * kEvsRecord);
  out.raw("EVS1", 4);
  out.put(std::uint32_t(stream.width));
  out.put(std::uint32_t(stream.height));
  out.put(stream.t_start);
  out.put(stream.t_end);
  out.put(std::uint64_t(stream.events.size()));
  for (const auto& e : stream.events) {
    out.put(e.x);
    out.put(e.y);
    out.put(e.t);
    out.put(e.polarity);
  }
  return out.take();
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Line {
  std::size_t number = 0;
  std::size_t offset = 0;
};

template <class T>
T parse_number(std::string_view tok, const Line& line, const char* what) {
  T v{};
  const auto* end = tok.data() + tok.size();
  const auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end)
    throw FormatError("line " + std::to_string(line.number) + ": bad " + what + " '" + std::string(tok) + "'",
                      line.offset);
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto k = s.find(sep, start);
    out.push_back(s.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start));
    if (k == std::string_view::npos) break;
    start = k + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string encode_events_csv(const EventStream& stream) {
  stream.validate();
  std::string out = "# width=" + std::to_string(stream.width) + " height=" + std::to_string(stream.height) +
                    " t_start=" + fmt17(stream.t_start) + " t_end=" + fmt17(stream.t_end) + "\nx,y,t,p\n";
  for (const auto& e : stream.events)
    out += std::to_string(e.x) + ',' + std::to_string(e.y) + ',' + fmt17(e.t) + ',' + std::to_string(e.polarity) + '\n';
  return out;
}

EventStream decode_events_csv(std::string_view text) {
  EventStream s;
  bool have_meta = false;
  bool have_header = false;
  Line at;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    at.offset = pos;
    ++at.number;
    pos = nl + 1;
    if (line.empty()) continue;
    if (!have_meta) {
      if (line.front() != '#') throw FormatError("csv: missing '# width=.. height=..' metadata line", at.offset);
      std::istringstream meta{std::string(line.substr(1))};
      std::string kv;
      int fields = 0;
      while (meta >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const auto key = kv.substr(0, eq);
        const std::string_view val = std::string_view(kv).substr(eq + 1);
        if (key == "width") s.width = parse_number<int>(val, at, "width"), ++fields;
        if (key == "height") s.height = parse_number<int>(val, at, "height"), ++fields;
        if (key == "t_start") s.t_start = parse_number<double>(val, at, "t_start"), ++fields;
        if (key == "t_end") s.t_end = parse_number<double>(val, at, "t_end"), ++fields;
      }
      if (fields != 4) throw FormatError("csv: metadata needs width, height, t_start, t_end", at.offset);
      have_meta = true;
      continue;
    }
    if (!have_header) {
      if (line != "x,y,t,p") throw FormatError("csv: expected header 'x,y,t,p'", at.offset);
      have_header = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 4) throw FormatError("csv line " + std::to_string(at.number) + ": expected 4 fields", at.offset);
    const auto x = parse_number<long>(trim(cols[0]), at, "x");
    const auto y = parse_number<long>(trim(cols[1]), at, "y");
    const auto t = parse_number<double>(trim(cols[2]), at, "t");
    const auto p = parse_number<int>(trim(cols[3]), at, "polarity");
    const auto record = std::to_string(s.events.size());
    if (x < 0 || x > 65535) throw ValidationError("event " + record + ": x=" + std::to_string(x) + " outside width");
    if (y < 0 || y > 65535) throw ValidationError("event " + record + ": y=" + std::to_string(y) + " outside height");
    if (p < -128 || p > 127) throw ValidationError("event " + record + ": polarity must be +1 or -1");
    s.events.push_back(Event{std::uint16_t(x), std::uint16_t(y), t, std::int8_t(p)});
  }
  if (!have_header) throw FormatError("csv: missing header", text.size());
  s.validate();
  return s;
}

EventStream read_events(const std::string& path, std::optional<EventFormat> format) {
  const auto data = read_file(path);
  if (format.value_or(event_format_for(path)) == EventFormat::csv)
    return decode_events_csv(std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
  return decode_evs(data);
}

void write_events(const EventStream& stream, const std::string& path, std::optional<EventFormat> format) {
  if (format.value_or(event_format_for(path)) == EventFormat::csv) {
    const auto text = encode_events_csv(stream);
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  } else {
    write_file(path, encode_evs(stream));
  }
}

// ---- masks ----

FlowMask decode_mask(std::span<const std::uint8_t> data) {
  ByteReader in(data, "msk");
  if (!in.match("MSK1", 4)) throw FormatError("msk: bad magic", 0);
  const auto w = in.get<std::uint32_t>("width");
  const auto h = in.get<std::uint32_t>("height");
  if (w < 1 || h < 1 || std::uint64_t(w) * h > (std::uint64_t(1) << 28)) throw FormatError("msk: bad dimensions", 4);
  FlowMask m;
  m.tau = in.get<double>("tau");
  in.expect_exactly(std::size_t(w) * h * 16, "mask planes");
  for (Plane<double>* p : {&m.omega_0t_u, &m.omega_0t_v, &m.omega_1t_u, &m.omega_1t_v}) {
    p->resize(h, w);
    for (std::uint32_t y = 0; y < h; ++y)
      for (std::uint32_t x = 0; x < w; ++x) (*p)(y, x) = in.get<float>("mask value");
  }
  return m;
}

Bytes encode_mask(const FlowMask& m) {
  const auto h = m.omega_0t_u.rows();
  const auto w = m.omega_0t_u.cols();
  for (const Plane<double>* p : {&m.omega_0t_u, &m.omega_0t_v, &m.omega_1t_u, &m.omega_1t_v}) {
    if (p->rows() != h || p->cols() != w) throw ArgumentError("mask planes differ in size");
    if (!p->allFinite()) throw ValidationError("msk: mask contains NaN or Inf");
  }
  ByteWriter out(24 + std::size_t(w * h) * 16);
  out.raw("MSK1", 4);
  out.put(std::uint32_t(w));
  out.put(std::uint32_t(h));
  out.put(m.tau);
  for (const Plane<double>* p : {&m.omega_0t_u, &m.omega_0t_v, &m.omega_1t_u, &m.omega_1t_v})
    for (Eigen::Index y = 0; y < h; ++y)
      for (Eigen::Index x = 0; x < w; ++x) out.put(float((*p)(y, x)));
  return out.take();
}

FlowMask read_mask(const std::string& path) { return decode_mask(read_file(path)); }
void write_mask(const FlowMask& mask, const std::string& path) { write_file(path, encode_mask(mask)); }

// ---- metrics report ----

namespace {

std::string cell(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

std::string cell(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string("metrics: non-finite ") + what);
  return fmt17(v);
}

std::optional<double> optional_number(std::string_view tok, const Line& line) {
  tok = trim(tok);
  if (tok.empty()) return std::nullopt;
  return parse_number<double>(tok, line, "value");
}

}  // namespace

std::string encode_metrics_csv(const std::vector<MetricsRecord>& records) {
  std::string out = "name,tau,psnr,ssim,ie,mc_loss\n";
  for (const auto& r : records) {
    if (r.name.find_first_of(",\n") != std::string::npos) throw ArgumentError("metrics: name contains ',' or newline");
    if ((r.tau && !std::isfinite(*r.tau)) || (r.mc_loss && !std::isfinite(*r.mc_loss)))
      throw ValidationError("metrics: non-finite value in record " + r.name);
    out += r.name + ',' + cell(r.tau) + ',' + cell(r.psnr, "psnr") + ',' + cell(r.ssim, "ssim") + ',' +
           cell(r.ie, "ie") + ',' + cell(r.mc_loss) + '\n';
  }
  return out;
}

std::vector<MetricsRecord> decode_metrics_csv(std::string_view text) {
  std::vector<MetricsRecord> out;
  Line at;
  std::size_t pos = 0;
  bool header = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    at.offset = pos;
    ++at.number;
    pos = nl + 1;
    if (line.empty()) continue;
    if (!header) {
      if (line != "name,tau,psnr,ssim,ie,mc_loss") throw FormatError("metrics: unexpected header", at.offset);
      header = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 6) throw FormatError("metrics line " + std::to_string(at.number) + ": expected 6 fields", at.offset);
    MetricsRecord r;
    r.name = std::string(cols[0]);
    r.tau = optional_number(cols[1], at);
    r.psnr = parse_number<double>(trim(cols[2]), at, "psnr");
    r.ssim = parse_number<double>(trim(cols[3]), at, "ssim");
    r.ie = parse_number<double>(trim(cols[4]), at, "ie");
    r.mc_loss = optional_number(cols[5], at);
    out.push_back(r);
  }
  if (!header) throw FormatError("metrics: missing header", 0);
  return out;
}

void write_metrics_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
  const auto text = encode_metrics_csv(records);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace evfi

#pragma once

#include "evfi/events.hpp"
#include "evfi/flow_mask.hpp"
#include "evfi/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evfi {

using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> data);

// Frames. PGM is 8-bit P5 only. PNG input may be gray, gray+alpha, RGB, RGBA
// or palette at 8 bits or less per channel; color is reduced to luma
// 0.299 R + 0.587 G + 0.114 B. Output is always 8-bit gray, values rounded
// from [0,1] to 0..255.
Frame decode_pgm(std::span<const std::uint8_t> data);
Bytes encode_pgm(const Frame& frame);
Frame decode_png(std::span<const std::uint8_t> data);
Bytes encode_png(const Frame& frame);

/// Picks the codec from the extension (.pgm or .png).
Frame read_frame(const std::string& path);
void write_frame(const Frame& frame, const std::string& path);

/// 8-bit quantization used by every frame writer.
Frame quantize8(const Frame& frame);

// Middlebury .flo: float 202021.25, i32 width, i32 height, then interleaved
// float32 u,v per pixel in row-major order. Little-endian.
inline constexpr float kFloMagic = 202021.25f;

FlowField decode_flo(std::span<const std::uint8_t> data);
Bytes encode_flo(const FlowField& flow);
FlowField read_flo(const std::string& path);
void write_flo(const FlowField& flow, const std::string& path);

// Event streams. EVS1 binary (little-endian): "EVS1", u32 width, u32 height,
// f64 t_start, f64 t_end, u64 count, then per event u16 x, u16 y, f64 t,
// i8 polarity (13 bytes, no padding).
//
// CSV: a metadata comment "# width=W height=H t_start=A t_end=B", a header
// row "x,y,t,p", then one event per row. Times are written with 17
// significant digits so the text form round-trips exactly.
enum class EventFormat { binary, csv };

/// .csv selects CSV, anything else EVS1.
EventFormat event_format_for(const std::string& path);

EventStream decode_evs(std::span<const std::uint8_t> data);
Bytes encode_evs(const EventStream& stream);
EventStream decode_events_csv(std::string_view text);
std::string encode_events_csv(const EventStream& stream);

EventStream read_events(const std::string& path, std::optional<EventFormat> format = std::nullopt);
void write_events(const EventStream& stream, const std::string& path,
                  std::optional<EventFormat> format = std::nullopt);

// Flow masks: "MSK1", u32 width, u32 height, f64 tau, then four float32
// planes omega_0t_u, omega_0t_v, omega_1t_u, omega_1t_v, each row-major.
FlowMask decode_mask(std::span<const std::uint8_t> data);
Bytes encode_mask(const FlowMask& mask);
FlowMask read_mask(const std::string& path);
void write_mask(const FlowMask& mask, const std::string& path);

// Metrics report: CSV with header "name,tau,psnr,ssim,ie,mc_loss", one row
// per frame. Missing values are written as empty cells.
struct MetricsRecord {
  std::string name;
  std::optional<double> tau;
  double psnr = 0.0;
  double ssim = 0.0;
  double ie = 0.0;
  std::optional<double> mc_loss;
};

std::string encode_metrics_csv(const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> decode_metrics_csv(std::string_view text);
void write_metrics_csv(const std::vector<MetricsRecord>& records, const std::string& path);

}  // namespace evfi

#include "evfi/errors.hpp"
#include "evfi/io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>

namespace evfi {

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path);
  return data;
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
  if (!out) throw IoError("failed writing " + path);
}

namespace {

void check_finite(const Frame& frame, const char* what) {
  if (!frame.allFinite()) throw ValidationError(std::string(what) + ": frame contains NaN or Inf");
}

std::string lower_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return ext;
}

// Reads one unsigned header integer, skipping whitespace and # comments.
unsigned long pgm_field(std::span<const std::uint8_t> d, std::size_t& pos, const char* name,
                        std::size_t* field_start = nullptr) {
  while (pos < d.size()) {
    if (d[pos] == '#') {
      while (pos < d.size() && d[pos] != '\n') ++pos;
    } else if (std::isspace(d[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  if (field_start) *field_start = start;
  unsigned long v = 0;
  while (pos < d.size() && std::isdigit(d[pos])) {
    v = v * 10 + (d[pos] - '0');
    if (v > 0xFFFFFFul) throw FormatError(std::string("pgm: ") + name + " too large", start);
    ++pos;
  }
  if (pos == start) throw FormatError(std::string("pgm: expected ") + name, start);
  return v;
}

}  // namespace

Frame quantize8(const Frame& frame) {
  check_finite(frame, "quantize8");
  return (frame.cwiseMax(0.0).cwiseMin(1.0) * 255.0).round() / 255.0;
}

Frame decode_pgm(std::span<const std::uint8_t> d) {
  if (d.size() < 2 || d[0] != 'P' || d[1] != '5') throw FormatError("pgm: missing P5 magic", 0);
  std::size_t pos = 2;
  const auto w = pgm_field(d, pos, "width");
  const auto h = pgm_field(d, pos, "height");
  std::size_t maxval_at = 0;
  const auto maxval = pgm_field(d, pos, "maxval", &maxval_at);
  if (w == 0 || h == 0) throw FormatError("pgm: zero dimension", maxval_at);
  if (maxval == 0) throw FormatError("pgm: maxval must be positive", maxval_at);
  if (maxval > 255) throw FormatError("pgm: unsupported bit depth (maxval " + std::to_string(maxval) + ")", maxval_at);
  if (pos >= d.size() || !std::isspace(d[pos])) throw FormatError("pgm: expected whitespace after maxval", pos);
  ++pos;
  const std::size_t n = w * h;
  if (d.size() - pos < n) throw FormatError("pgm: truncated pixel data", d.size());
  Frame f(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(w));
  for (std::size_t i = 0; i < n; ++i) {
    if (d[pos + i] > maxval) throw FormatError("pgm: sample exceeds maxval", pos + i);
    f(Eigen::Index(i / w), Eigen::Index(i % w)) = double(d[pos + i]) / double(maxval);
  }
  return f;
}

Bytes encode_pgm(const Frame& frame) {
  check_finite(frame, "pgm");
  const std::string header = "P5\n" + std::to_string(frame.cols()) + " " + std::to_string(frame.rows()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.reserve(out.size() + std::size_t(frame.size()));
  for (Eigen::Index y = 0; y < frame.rows(); ++y)
    for (Eigen::Index x = 0; x < frame.cols(); ++x)
      out.push_back(std::uint8_t(std::lround(std::clamp(frame(y, x), 0.0, 1.0) * 255.0)));
  return out;
}

namespace {

struct PngSource {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;
  char message[256] = {0};
};

void png_read_mem(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->data.size() - src->pos < n) png_error(png, "truncated data");
  std::memcpy(out, src->data.data() + src->pos, n);
  src->pos += n;
}

void png_on_error(png_structp png, png_const_charp msg) {
  auto* src = static_cast<PngSource*>(png_get_error_ptr(png));
  std::snprintf(src->message, sizeof(src->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

struct PngImage {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  bool bad_depth = false;
};

// All libpng calls live here so nothing with a destructor is touched between
// setjmp and a longjmp. Returns false with src.message set on failure.
bool png_decode_raw(PngSource& src, PngImage& img) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &src, png_on_error, png_on_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &src, png_read_mem);
  png_read_info(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int type = png_get_color_type(png, info);
  if (depth > 8) {
    img.bad_depth = true;
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  if (type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  img.width = png_get_image_width(png, info);
  img.height = png_get_image_height(png, info);
  img.channels = png_get_channels(png, info);
  const auto stride = png_get_rowbytes(png, info);
  img.pixels.resize(std::size_t(stride) * img.height);
  img.rows.resize(img.height);
  for (png_uint_32 y = 0; y < img.height; ++y) img.rows[y] = img.pixels.data() + std::size_t(y) * stride;
  png_read_image(png, img.rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

struct PngSink {
  Bytes out;
  char message[256] = {0};
};

void png_write_mem(png_structp png, png_bytep data, png_size_t n) {
  auto* sink = static_cast<PngSink*>(png_get_io_ptr(png));
  sink->out.insert(sink->out.end(), data, data + n);
}

void png_flush_mem(png_structp) {}

void png_on_write_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  png_longjmp(png, 1);
}

bool png_encode_raw(PngSink& sink, const std::vector<std::uint8_t>& gray, png_uint_32 w, png_uint_32 h) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, png_on_write_error, png_on_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, &sink, png_write_mem, png_flush_mem);
  png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (png_uint_32 y = 0; y < h; ++y) png_write_row(png, const_cast<png_bytep>(gray.data() + std::size_t(y) * w));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

Frame decode_png(std::span<const std::uint8_t> data) {
  if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0) throw FormatError("png: bad signature", 0);
  PngSource src{data};
  PngImage img;
  if (!png_decode_raw(src, img)) {
    // IHDR bit depth sits at byte 24: 8 signature + 8 chunk header + 8 dims.
    if (img.bad_depth) throw FormatError("png: unsupported bit depth (16 bits per sample)", 24);
    throw FormatError(std::string("png: ") + (src.message[0] ? src.message : "decoder failure"), src.pos);
  }
  Frame f(static_cast<Eigen::Index>(img.height), static_cast<Eigen::Index>(img.width));
  const std::size_t stride = std::size_t(img.width) * img.channels;
  for (png_uint_32 y = 0; y < img.height; ++y) {
    const std::uint8_t* row = img.pixels.data() + y * stride;
    for (png_uint_32 x = 0; x < img.width; ++x) {
      if (img.channels == 1) {
        f(y, x) = row[x] / 255.0;
      } else {
        const std::uint8_t* p = row + 3 * x;
        f(y, x) = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
      }
    }
  }
  return f;
}

Bytes encode_png(const Frame& frame) {
  check_finite(frame, "png");
  std::vector<std::uint8_t> gray;
  gray.reserve(std::size_t(frame.size()));
  for (Eigen::Index y = 0; y < frame.rows(); ++y)
    for (Eigen::Index x = 0; x < frame.cols(); ++x)
      gray.push_back(std::uint8_t(std::lround(std::clamp(frame(y, x), 0.0, 1.0) * 255.0)));
  PngSink sink;
  if (!png_encode_raw(sink, gray, png_uint_32(frame.cols()), png_uint_32(frame.rows())))
    throw IoError(std::string("png encoder failure: ") + sink.message);
  return std::move(sink.out);
}

Frame read_frame(const std::string& path) {
  const auto ext = lower_extension(path);
  if (ext == "pgm") return decode_pgm(read_file(path));
  if (ext == "png") return decode_png(read_file(path));
  throw ArgumentError("unsupported frame extension in " + path + " (use .pgm or .png)");
}

void write_frame(const Frame& frame, const std::string& path) {
  const auto ext = lower_extension(path);
  if (ext == "pgm") return write_file(path, encode_pgm(frame));
  if (ext == "png") return write_file(path, encode_png(frame));
  throw ArgumentError("unsupported frame extension in " + path + " (use .pgm or .png)");
}

}  // namespace evfi

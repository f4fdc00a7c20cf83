#pragma once

// Little-endian packing shared by the binary codecs.

#include "evfi/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace evfi::detail {

class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve = 0) { buf_.reserve(reserve); }

  void raw(const char* s, std::size_t n) { buf_.insert(buf_.end(), s, s + n); }

  template <class T>
  void put(T v) {
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
                                 std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                                    std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    const auto u = std::bit_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) buf_.push_back(std::uint8_t(u >> (8 * i)));
  }

  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> data, const char* what) : data_(data), what_(what) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  bool match(const char* magic, std::size_t n) {
    if (remaining() < n || std::memcmp(data_.data() + pos_, magic, n) != 0) return false;
    pos_ += n;
    return true;
  }

  template <class T>
  T get(const char* field) {
    if (remaining() < sizeof(T))
      throw FormatError(std::string(what_) + ": truncated while reading " + field, data_.size());
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
                                 std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                                    std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= U(data_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return std::bit_cast<T>(u);
  }

  /// Fails unless exactly `n` more bytes remain.
  void expect_exactly(std::size_t n, const char* what) const {
    if (remaining() < n) throw FormatError(std::string(what_) + ": truncated " + what, data_.size());
    if (remaining() > n) throw FormatError(std::string(what_) + ": trailing bytes after " + what, pos_ + n);
  }

 private:
  std::span<const std::uint8_t> data_;
  const char* what_;
  std::size_t pos_ = 0;
};

}  // namespace evfi::detail

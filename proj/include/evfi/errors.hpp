#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evfi {

/// Bad argument: shape mismatch, inverted window, non-positive threshold.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A time or coordinate outside the operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Unknown preset, mode or toy name.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Malformed file content. Carries the byte offset where decoding failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Record-level validation failure in an otherwise well-formed file.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evfi

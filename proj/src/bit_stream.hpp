#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bcc::detail {

/// Appends LSB-first bit fields to a byte buffer.
class bit_writer {
 public:
  explicit bit_writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint64_t value, unsigned width) {
    for (unsigned i = 0; i < width; ++i) {
      if (used_ == 0) out_.push_back(0);
      if ((value >> i) & 1u) out_.back() |= static_cast<std::uint8_t>(1u << used_);
      used_ = (used_ + 1) & 7;
    }
  }

  /// Trailing bits of the last byte stay zero.
  void finish() { used_ = 0; }

 private:
  std::vector<std::uint8_t>& out_;
  unsigned used_ = 0;  // bits used in out_.back()
};

/// Reads LSB-first bit fields; the caller checks `remaining_bits` first.
class bit_reader {
 public:
  bit_reader(std::span<const std::uint8_t> bytes, std::uint64_t start_byte)
      : bytes_(bytes), pos_(start_byte * 8) {}

  std::uint64_t remaining_bits() const noexcept { return bytes_.size() * 8 - pos_; }
  std::uint64_t byte_offset() const noexcept { return pos_ / 8; }

  std::uint64_t get(unsigned width) noexcept {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i, ++pos_) {
      v |= std::uint64_t{(bytes_[pos_ >> 3] >> (pos_ & 7)) & 1u} << i;
    }
    return v;
  }

  /// Position after the last partially consumed byte.
  std::uint64_t end_byte() const noexcept { return (pos_ + 7) / 8; }

  /// True when the unread bits of the current byte are all zero.
  bool padding_clear() const noexcept {
    if ((pos_ & 7) == 0) return true;
    return (bytes_[pos_ >> 3] >> (pos_ & 7)) == 0;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t pos_;
};

}  // namespace bcc::detail

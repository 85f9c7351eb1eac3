#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace bcc {

/// Growable bit sequence backed by 64-bit words. Unused high bits of the last
/// word are kept zero so equality and popcount can work word-wise.
class bit_vector {
 public:
  bit_vector() = default;
  explicit bit_vector(std::size_t n, bool value = false)
      : words_((n + 63) / 64, value ? ~std::uint64_t{0} : 0), size_(n) {
    clear_tail();
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void push_back(bool value) {
    if ((size_ & 63) == 0) words_.push_back(0);
    ++size_;
    set(size_ - 1, value);
  }

  std::size_t popcount() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const bit_vector&, const bit_vector&) = default;

 private:
  void clear_tail() noexcept {
    if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }

  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

}  // namespace bcc

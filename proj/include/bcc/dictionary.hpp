#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bcc {

using value_id = std::uint32_t;

/// Bits needed to address `count` distinct IDs, with a floor of one bit.
unsigned id_width_for(std::uint64_t count) noexcept;

/// Sorted distinct column values. A value's position is its value ID.
class dictionary {
 public:
  dictionary() = default;

  /// Adopts `sorted_values`, which must be strictly ascending (byte-wise) and
  /// non-empty. Throws invariant_violation otherwise.
  static dictionary from_sorted(std::vector<std::string> sorted_values);

  const std::vector<std::string>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  unsigned width_bits() const noexcept { return width_bits_; }
  const std::string& operator[](value_id id) const { return values_[id]; }

  std::optional<value_id> find(std::string_view value) const;

  /// First ID whose value is >= `value` (may equal size()).
  std::size_t lower_bound(std::string_view value) const;
  /// First ID whose value is > `value` (may equal size()).
  std::size_t upper_bound(std::string_view value) const;

  friend bool operator==(const dictionary&, const dictionary&) = default;

 private:
  std::vector<std::string> values_;
  unsigned width_bits_ = 1;
};

struct value_id_array {
  std::vector<value_id> ids;
  unsigned id_width_bits = 1;

  std::size_t size() const noexcept { return ids.size(); }
  friend bool operator==(const value_id_array&, const value_id_array&) = default;
};

struct run {
  value_id value = 0;
  std::uint64_t count = 0;
  friend bool operator==(const run&, const run&) = default;
};

/// Maximal runs of a value-ID sequence.
using run_length_view = std::vector<run>;

/// One end of an ID interval; a missing bound means unbounded.
struct id_bound {
  value_id id = 0;
  bool inclusive = true;
  friend bool operator==(const id_bound&, const id_bound&) = default;
};

/// Set of value IDs selected by a predicate. Empty intervals are canonical:
/// `is_empty` set, both bounds cleared.
class id_interval {
 public:
  static id_interval all() { return {}; }
  static id_interval none();
  /// Normalizes to none() when the bounds admit no ID.
  static id_interval between(std::optional<id_bound> lo, std::optional<id_bound> hi);
  /// Inclusive [first, last].
  static id_interval closed(value_id first, value_id last);

  bool empty() const noexcept { return empty_; }
  const std::optional<id_bound>& lo() const noexcept { return lo_; }
  const std::optional<id_bound>& hi() const noexcept { return hi_; }

  /// Smallest admitted ID.
  std::uint64_t first() const noexcept;
  /// One past the largest admitted ID (2^32 when unbounded above).
  std::uint64_t end() const noexcept;

  bool contains(value_id id) const noexcept {
    return !empty_ && id >= first() && id < end();
  }

  friend bool operator==(const id_interval&, const id_interval&) = default;

 private:
  bool empty_ = false;
  std::optional<id_bound> lo_;
  std::optional<id_bound> hi_;
};

enum class compare_op { eq, lt, le, gt, ge, between };

dictionary build_dictionary(std::span<const std::string> values);

std::pair<dictionary, value_id_array> encode_column(std::span<const std::string> values);

/// Throws id_out_of_range if any ID has no dictionary entry.
std::vector<std::string> decode_column(const dictionary& dict, const value_id_array& ids);

/// Translates a value predicate into the interval of IDs whose values satisfy
/// it. `between` is inclusive on both ends and uses `operand2` as the upper
/// value; other operators ignore `operand2`.
id_interval predicate_to_id_range(const dictionary& dict, compare_op op,
                                  std::string_view operand,
                                  std::string_view operand2 = {});

run_length_view to_runs(std::span<const value_id> ids);

std::vector<value_id> expand_runs(const run_length_view& runs);

}  // namespace bcc

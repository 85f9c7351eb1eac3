#include "bcc/dictionary.hpp"

#include <algorithm>
#include <bit>

#include "bcc/error.hpp"

namespace bcc {

unsigned id_width_for(std::uint64_t count) noexcept {
  if (count <= 2) return 1;
  return static_cast<unsigned>(std::bit_width(count - 1));
}

dictionary dictionary::from_sorted(std::vector<std::string> sorted_values) {
  if (sorted_values.empty()) {
    throw error(errc::invariant_violation, "dictionary must not be empty");
  }
  if (sorted_values.size() > std::numeric_limits<value_id>::max()) {
    throw error(errc::invariant_violation, "dictionary exceeds 2^32-1 entries");
  }
  for (std::size_t i = 1; i < sorted_values.size(); ++i) {
    if (!(sorted_values[i - 1] < sorted_values[i])) {
      throw error(errc::invariant_violation,
                  "dictionary values not strictly ascending at index " + std::to_string(i));
    }
  }
  dictionary d;
  d.width_bits_ = id_width_for(sorted_values.size());
  d.values_ = std::move(sorted_values);
  return d;
}

std::optional<value_id> dictionary::find(std::string_view value) const {
  auto i = lower_bound(value);
  if (i < values_.size() && values_[i] == value) return static_cast<value_id>(i);
  return std::nullopt;
}

std::size_t dictionary::lower_bound(std::string_view value) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), value,
                             [](const std::string& a, std::string_view b) { return a < b; });
  return static_cast<std::size_t>(it - values_.begin());
}

std::size_t dictionary::upper_bound(std::string_view value) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), value,
                             [](std::string_view a, const std::string& b) { return a < b; });
  return static_cast<std::size_t>(it - values_.begin());
}

id_interval id_interval::none() {
  id_interval r;
  r.empty_ = true;
  return r;
}

id_interval id_interval::between(std::optional<id_bound> lo, std::optional<id_bound> hi) {
  id_interval r;
  r.lo_ = lo;
  r.hi_ = hi;
  if (r.first() >= r.end()) return none();
  return r;
}

id_interval id_interval::closed(value_id first, value_id last) {
  return between(id_bound{first, true}, id_bound{last, true});
}

std::uint64_t id_interval::first() const noexcept {
  if (empty_ || !lo_) return 0;
  return lo_->inclusive ? std::uint64_t{lo_->id} : std::uint64_t{lo_->id} + 1;
}

std::uint64_t id_interval::end() const noexcept {
  if (empty_) return 0;
  if (!hi_) return std::uint64_t{1} << 32;
  return hi_->inclusive ? std::uint64_t{hi_->id} + 1 : std::uint64_t{hi_->id};
}

dictionary build_dictionary(std::span<const std::string> values) {
  if (values.empty()) throw error(errc::empty_column, "column has no values");
  std::vector<std::string> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return dictionary::from_sorted(std::move(sorted));
}

std::pair<dictionary, value_id_array> encode_column(std::span<const std::string> values) {
  dictionary dict = build_dictionary(values);
  value_id_array out;
  out.id_width_bits = dict.width_bits();
  out.ids.reserve(values.size());
  for (const auto& v : values) {
    out.ids.push_back(static_cast<value_id>(dict.lower_bound(v)));
  }
  return {std::move(dict), std::move(out)};
}

std::vector<std::string> decode_column(const dictionary& dict, const value_id_array& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.ids.size(); ++i) {
    const value_id id = ids.ids[i];
    if (id >= dict.size()) {
      throw error(errc::id_out_of_range, "id " + std::to_string(id) + " at row " +
                                             std::to_string(i) + " exceeds dictionary size " +
                                             std::to_string(dict.size()));
    }
    out.push_back(dict[id]);
  }
  return out;
}

id_interval predicate_to_id_range(const dictionary& dict, compare_op op,
                                  std::string_view operand, std::string_view operand2) {
  const std::size_t n = dict.size();
  // Lower bound admitting every value >= v.
  auto at_least = [&](std::string_view v) -> std::optional<std::optional<id_bound>> {
    const std::size_t i = dict.lower_bound(v);
    if (i == n) return std::nullopt;  // nothing qualifies
    if (i == 0) return std::optional<id_bound>{};
    return std::optional<id_bound>{id_bound{static_cast<value_id>(i), true}};
  };
  // Upper bound admitting every value <= v.
  auto at_most = [&](std::string_view v) -> std::optional<std::optional<id_bound>> {
    const std::size_t j = dict.upper_bound(v);
    if (j == 0) return std::nullopt;
    if (j == n) return std::optional<id_bound>{};
    return std::optional<id_bound>{id_bound{static_cast<value_id>(j - 1), true}};
  };

  switch (op) {
    case compare_op::eq: {
      if (auto id = dict.find(operand)) return id_interval::closed(*id, *id);
      return id_interval::none();
    }
    case compare_op::gt: {
      // IDs above the greatest value <= operand.
      const std::size_t j = dict.upper_bound(operand);
      if (j == n) return id_interval::none();
      if (j == 0) return id_interval::all();
      return id_interval::between(id_bound{static_cast<value_id>(j - 1), false}, std::nullopt);
    }
    case compare_op::lt: {
      // IDs below the smallest value >= operand.
      const std::size_t i = dict.lower_bound(operand);
      if (i == 0) return id_interval::none();
      if (i == n) return id_interval::all();
      return id_interval::between(std::nullopt, id_bound{static_cast<value_id>(i), false});
    }
    case compare_op::ge: {
      auto lo = at_least(operand);
      if (!lo) return id_interval::none();
      return id_interval::between(*lo, std::nullopt);
    }
    case compare_op::le: {
      auto hi = at_most(operand);
      if (!hi) return id_interval::none();
      return id_interval::between(std::nullopt, *hi);
    }
    case compare_op::between: {
      auto lo = at_least(operand);
      auto hi = at_most(operand2);
      if (!lo || !hi) return id_interval::none();
      return id_interval::between(*lo, *hi);
    }
  }
  return id_interval::none();
}

run_length_view to_runs(std::span<const value_id> ids) {
  run_length_view runs;
  for (value_id id : ids) {
    if (!runs.empty() && runs.back().value == id) {
      ++runs.back().count;
    } else {
      runs.push_back({id, 1});
    }
  }
  return runs;
}

std::vector<value_id> expand_runs(const run_length_view& runs) {
  std::vector<value_id> out;
  for (const auto& r : runs) out.insert(out.end(), r.count, r.value);
  return out;
}

}  // namespace bcc

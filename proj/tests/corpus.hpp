#pragma once

// Seeded generators for value-ID arrays used across the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bcc/dictionary.hpp"

namespace bcc::testing {

enum class family { constant, sorted, sequential, uniform2, uniform16, uniform256, zipf };

inline constexpr family all_families[] = {family::constant,  family::sorted,
                                          family::sequential, family::uniform2,
                                          family::uniform16, family::uniform256,
                                          family::zipf};

inline const char* family_name(family f) {
  switch (f) {
    case family::constant: return "constant";
    case family::sorted: return "sorted";
    case family::sequential: return "sequential";
    case family::uniform2: return "uniform(k=2)";
    case family::uniform16: return "uniform(k=16)";
    case family::uniform256: return "uniform(k=256)";
    case family::zipf: return "zipf(s=1.2)";
  }
  return "?";
}

/// Zipf over ranks 0..support-1 with exponent s.
class zipf_sampler {
 public:
  zipf_sampler(std::size_t support, double s) {
    std::vector<double> w(support);
    for (std::size_t r = 0; r < support; ++r) w[r] = 1.0 / std::pow(double(r + 1), s);
    dist_ = std::discrete_distribution<value_id>(w.begin(), w.end());
  }
  template <class Rng>
  value_id operator()(Rng& rng) {
    return dist_(rng);
  }

 private:
  std::discrete_distribution<value_id> dist_;
};

/// Raw IDs of length n; IDs are not compacted, so use `compact` when a
/// dense dictionary is needed.
inline std::vector<value_id> generate(family f, std::size_t n, std::mt19937_64& rng) {
  std::vector<value_id> ids(n);
  auto uniform = [&](value_id k) {
    std::uniform_int_distribution<value_id> d(0, k - 1);
    for (auto& v : ids) v = d(rng);
  };
  switch (f) {
    case family::constant: {
      std::uniform_int_distribution<value_id> d(0, 1000);
      std::fill(ids.begin(), ids.end(), d(rng));
      break;
    }
    case family::sorted: {
      std::uniform_int_distribution<value_id> d(0, static_cast<value_id>(std::max<std::size_t>(n / 4, 1)));
      for (auto& v : ids) v = d(rng);
      std::sort(ids.begin(), ids.end());
      break;
    }
    case family::sequential: {
      std::bernoulli_distribution down(0.5);
      const bool dec = down(rng);
      for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<value_id>(dec ? n - 1 - i : i);
      break;
    }
    case family::uniform2: uniform(2); break;
    case family::uniform16: uniform(16); break;
    case family::uniform256: uniform(256); break;
    case family::zipf: {
      zipf_sampler z(1000, 1.2);
      for (auto& v : ids) v = z(rng);
      break;
    }
  }
  return ids;
}

/// Random runs with geometric lengths over a small alphabet.
inline std::vector<value_id> generate_runs(std::size_t n, std::mt19937_64& rng, double p = 0.02,
                                           value_id alphabet = 8) {
  std::geometric_distribution<std::size_t> len(p);
  std::uniform_int_distribution<value_id> val(0, alphabet - 1);
  std::vector<value_id> ids;
  ids.reserve(n);
  while (ids.size() < n) {
    const std::size_t l = std::min(n - ids.size(), len(rng) + 1);
    ids.insert(ids.end(), l, val(rng));
  }
  return ids;
}

/// Renumbers IDs densely in value order and sets the matching width.
inline value_id_array compact(const std::vector<value_id>& raw) {
  std::vector<value_id> sorted(raw);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  value_id_array out;
  out.id_width_bits = id_width_for(sorted.size());
  out.ids.reserve(raw.size());
  for (auto v : raw) {
    out.ids.push_back(static_cast<value_id>(std::lower_bound(sorted.begin(), sorted.end(), v) -
                                            sorted.begin()));
  }
  return out;
}

/// Dictionary of `count` zero-padded decimal strings, ascending.
inline dictionary numeric_dictionary(std::size_t count) {
  std::vector<std::string> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string s = std::to_string(i);
    values.push_back(std::string(10 - s.size(), '0') + s);
  }
  return dictionary::from_sorted(std::move(values));
}

inline std::size_t dict_size_of(const value_id_array& ids) {
  return ids.ids.empty() ? 1 : std::size_t{*std::max_element(ids.ids.begin(), ids.ids.end())} + 1;
}

}  // namespace bcc::testing

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "bcc/block_optimizer.hpp"
#include "bcc/dictionary.hpp"
#include "bcc/encodings.hpp"

namespace bcc {

struct column_stats {
  std::uint64_t n = 0;
  std::uint64_t distinct = 0;
  bool is_sorted = false;      // non-decreasing
  bool is_sequential = false;  // N >= 2 and stride +1 or -1 throughout
  std::uint64_t leading_run = 0;
  std::uint64_t max_freq = 0;
  double avg_freq = 0.0;  // n / distinct
  double sparsity = 0.0;  // max_freq / avg_freq
  double avg_repetition() const noexcept { return avg_freq; }

  friend bool operator==(const column_stats&, const column_stats&) = default;
};

/// Tunables of the decision flowchart.
struct heuristic_params {
  double x = 10.0;  // sparsity threshold, > 1
  double y = 2.0;   // repetition threshold, > 1
  double z = 0.5;   // cluster coverage threshold, in (0, 1)

  /// Throws invalid_argument when a parameter is outside its range.
  void validate() const;
};

enum class decision_kind { no_compression, affine_rle, rle, prefix, sparse, cluster, indirect };

std::string_view decision_name(decision_kind k) noexcept;

/// Encoding scheme that realizes a decision.
scheme scheme_for(decision_kind k) noexcept;

struct scheme_decision {
  decision_kind kind = decision_kind::no_compression;
  column_stats stats;
  /// Set once the flowchart reaches the repetition branch.
  std::optional<cluster_objective> cluster;
  /// S * b* / n, alongside `cluster`.
  std::optional<double> cluster_coverage;
  /// Set for indirect decisions.
  std::optional<entropy_objective> indirect;

  /// b* for cluster/indirect decisions, 0 otherwise.
  std::uint64_t block_size() const noexcept;
};

/// Per-scheme characteristics that drive the decision: whether the scheme
/// works on blocks, wants sorted input, exploits sparsity, and can be
/// combined with a leading prefix. "*" marks "indifferent".
struct scheme_traits {
  std::string_view blocks;
  std::string_view sorting;
  std::string_view sparsity;
  std::string_view prefix;
};

/// Traits for prefix, rle, sparse, cluster and indirect; nullopt otherwise.
std::optional<scheme_traits> traits_of(scheme s) noexcept;

/// Throws empty_column for an empty array.
column_stats compute_stats(std::span<const value_id> ids);

scheme_decision decide_scheme(const column_stats& stats, std::span<const value_id> ids,
                              const heuristic_params& params,
                              const sweep_options& options = {});

}  // namespace bcc

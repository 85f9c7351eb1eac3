#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcc/dictionary.hpp"

namespace bcc {

/// How a candidate sweep is evaluated. `serial` is the reference path;
/// `parallel` spreads candidates over OpenMP threads and must return
/// bit-identical results.
enum class execution { serial, parallel };

struct sweep_options {
  /// Restrict candidates to b <= sqrt(N).
  bool sqrt_bound = false;
  execution exec = execution::parallel;
};

/// Instrumentation for complexity checks.
struct sweep_counters {
  std::uint64_t element_visits = 0;
};

struct cluster_objective {
  std::uint64_t block_size = 0;
  std::uint64_t clustered_blocks = 0;  // S
  std::uint64_t objective = 0;         // F = S * (b - 1)
  friend bool operator==(const cluster_objective&, const cluster_objective&) = default;
};

struct entropy_objective {
  std::uint64_t block_size = 0;
  double mean_entropy = 0.0;
  friend bool operator==(const entropy_objective&, const entropy_objective&) = default;
};

template <class Objective>
struct sweep_result {
  std::vector<Objective> trace;  // one entry per candidate, ascending b
  Objective best;
};

/// Powers of two 2, 4, ..., 2^floor(log2 n) (capped at 2^31). With
/// `sqrt_bound`, only b with b*b <= n; falls back to {2} if that leaves none.
std::vector<std::uint64_t> candidate_block_sizes(std::uint64_t n, bool sqrt_bound = false);

/// Number of aligned, full, single-valued blocks of size `block_size`,
/// computed from maximal runs in O(runs).
///
/// A run that starts `r` elements into a block first spends (b - r) mod b
/// elements finishing that block (never single-valued, since runs are
/// maximal), then closes floor(remaining / b) clean blocks.
std::uint64_t clustered_block_count(const run_length_view& runs, std::uint64_t block_size,
                                    sweep_counters* counters = nullptr);

/// Brute-force block walk over the raw IDs.
std::uint64_t clustered_block_count_oracle(std::span<const value_id> ids,
                                           std::uint64_t block_size);

/// F(b) = S(b) * (b - 1) for every candidate; best is the first maximum.
/// Throws empty_column when fewer than two IDs are given.
sweep_result<cluster_objective> sweep_cluster_block_sizes(std::span<const value_id> ids,
                                                          const sweep_options& options = {},
                                                          sweep_counters* counters = nullptr);

cluster_objective optimal_cluster_block_size(std::span<const value_id> ids,
                                             const sweep_options& options = {});

/// Shannon entropy of the block's value distribution in base `base`.
double block_entropy(std::span<const value_id> block, std::uint64_t base);

/// Entropy summed over full aligned blocks, divided by ceil(N/b).
entropy_objective mean_block_entropy(std::span<const value_id> ids, std::uint64_t block_size);

/// Mean block entropy for every candidate; best is the first minimum.
sweep_result<entropy_objective> sweep_indirect_block_sizes(std::span<const value_id> ids,
                                                           const sweep_options& options = {},
                                                           sweep_counters* counters = nullptr);

entropy_objective optimal_indirect_block_size(std::span<const value_id> ids,
                                              const sweep_options& options = {});

}  // namespace bcc

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bcc/block_optimizer.hpp"
#include "bcc/dictionary.hpp"
#include "bcc/encodings.hpp"
#include "bcc/heuristic.hpp"

namespace bcc {

struct analyze_report {
  heuristic_params params;
  bool sqrt_bound = false;
  std::uint64_t id_width_bits = 0;
  std::uint64_t dict_count = 0;
  column_stats stats;
  scheme_decision decision;
  /// Logical size per scheme tag; empty where the scheme does not apply.
  std::array<std::optional<std::uint64_t>, scheme_count> sizes_bits;
  /// Block size used for the cluster/indirect size entries.
  std::uint64_t cluster_block_size = 0;
  std::uint64_t indirect_block_size = 0;
  std::vector<cluster_objective> cluster_trace;
  std::vector<entropy_objective> entropy_trace;
};

analyze_report analyze(const dictionary& dict, const value_id_array& ids,
                       const heuristic_params& params, const sweep_options& options = {});

/// Report as JSON text with a fixed key order.
std::string to_json(const analyze_report& report);

struct verify_check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct verify_options {
  heuristic_params params;
  sweep_options sweep;
  std::uint64_t seed = 1;
  std::size_t scan_trials = 20;
  /// Corrupts one decoded ID so the suite's negative control can observe a
  /// failure. Only the fault-injection test build sets this.
  bool inject_fault = false;
};

/// Round-trips every applicable scheme, cross-checks both block-size
/// optimizers against brute-force oracles and checks size accounting.
std::vector<verify_check> verify_column(std::span<const std::string> values,
                                        const verify_options& options);

}  // namespace bcc

#include "bcc/block_optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "bcc/encodings.hpp"
#include "bcc/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bcc {

namespace {

void require_two(std::span<const value_id> ids) {
  if (ids.size() < 2) {
    throw error(errc::empty_column, "block-size optimization needs at least two IDs");
  }
}

// Sums -p log p over `counts` (sorted ascending so the result depends only on
// the multiset of counts), scaled to base `base`.
double entropy_of_counts(std::vector<std::uint64_t>& counts, std::uint64_t len,
                         std::uint64_t base) {
  if (counts.size() <= 1) return 0.0;
  std::sort(counts.begin(), counts.end());
  const double total = static_cast<double>(len);
  double h = 0.0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(base));
}

// Per-thread histogram over IDs, reset via the touched list.
class block_histogram {
 public:
  explicit block_histogram(std::size_t universe) : freq_(universe, 0) {}

  double entropy(std::span<const value_id> block, std::uint64_t base) {
    for (value_id v : block) {
      if (freq_[v]++ == 0) touched_.push_back(v);
    }
    counts_.clear();
    for (value_id v : touched_) {
      counts_.push_back(freq_[v]);
      freq_[v] = 0;
    }
    touched_.clear();
    return entropy_of_counts(counts_, block.size(), base);
  }

 private:
  std::vector<std::uint64_t> freq_;
  std::vector<value_id> touched_;
  std::vector<std::uint64_t> counts_;
};

double mean_entropy_with(block_histogram& hist, std::span<const value_id> ids,
                         std::uint64_t b) {
  const std::uint64_t n = ids.size();
  const std::uint64_t full = n / b;
  double sum = 0.0;
  for (std::uint64_t blk = 0; blk < full; ++blk) sum += hist.entropy(ids.subspan(blk * b, b), b);
  return sum / static_cast<double>((n + b - 1) / b);
}

template <class Eval>
void for_each_candidate(std::size_t count, execution exec, Eval&& eval) {
  if (exec == execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
      eval(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) eval(i);
  }
}

}  // namespace

std::vector<std::uint64_t> candidate_block_sizes(std::uint64_t n, bool sqrt_bound) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 2; b <= n && b <= (std::uint64_t{1} << 31); b <<= 1) {
    if (sqrt_bound && b * b > n) break;
    out.push_back(b);
  }
  if (out.empty() && n >= 2) out.push_back(2);
  return out;
}

std::uint64_t clustered_block_count(const run_length_view& runs, std::uint64_t b,
                                    sweep_counters* counters) {
  check_block_size(b);
  std::uint64_t clustered = 0;
  std::uint64_t offset = 0;  // elements of the current block already consumed
  for (const auto& r : runs) {
    const std::uint64_t lead = (b - offset) % b;
    if (r.count > lead) clustered += (r.count - lead) / b;
    offset = (offset + r.count) % b;
  }
  if (counters) counters->element_visits += runs.size();
  return clustered;
}

std::uint64_t clustered_block_count_oracle(std::span<const value_id> ids, std::uint64_t b) {
  check_block_size(b);
  std::uint64_t clustered = 0;
  for (std::uint64_t begin = 0; begin + b <= ids.size(); begin += b) {
    auto block = ids.subspan(begin, b);
    if (std::all_of(block.begin(), block.end(), [&](value_id v) { return v == block[0]; })) {
      ++clustered;
    }
  }
  return clustered;
}

sweep_result<cluster_objective> sweep_cluster_block_sizes(std::span<const value_id> ids,
                                                          const sweep_options& options,
                                                          sweep_counters* counters) {
  require_two(ids);
  const run_length_view runs = to_runs(ids);
  const auto candidates = candidate_block_sizes(ids.size(), options.sqrt_bound);

  sweep_result<cluster_objective> result;
  result.trace.resize(candidates.size());
  for_each_candidate(candidates.size(), options.exec, [&](std::size_t i) {
    const std::uint64_t b = candidates[i];
    const std::uint64_t s = clustered_block_count(runs, b);
    result.trace[i] = {b, s, s * (b - 1)};
  });
  if (counters) counters->element_visits += ids.size() + runs.size() * candidates.size();

  result.best = result.trace.front();
  for (const auto& c : result.trace) {
    if (c.objective > result.best.objective) result.best = c;
  }
  return result;
}

cluster_objective optimal_cluster_block_size(std::span<const value_id> ids,
                                             const sweep_options& options) {
  return sweep_cluster_block_sizes(ids, options).best;
}

double block_entropy(std::span<const value_id> block, std::uint64_t base) {
  if (block.empty()) return 0.0;
  std::vector<value_id> sorted(block.begin(), block.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> counts;
  for (const auto& r : to_runs(sorted)) counts.push_back(r.count);
  return entropy_of_counts(counts, block.size(), base);
}

entropy_objective mean_block_entropy(std::span<const value_id> ids, std::uint64_t b) {
  check_block_size(b);
  if (ids.empty()) return {b, 0.0};
  block_histogram hist(std::size_t{*std::max_element(ids.begin(), ids.end())} + 1);
  return {b, mean_entropy_with(hist, ids, b)};
}

sweep_result<entropy_objective> sweep_indirect_block_sizes(std::span<const value_id> ids,
                                                           const sweep_options& options,
                                                           sweep_counters* counters) {
  require_two(ids);
  const auto candidates = candidate_block_sizes(ids.size(), options.sqrt_bound);
  const std::size_t universe = std::size_t{*std::max_element(ids.begin(), ids.end())} + 1;

  sweep_result<entropy_objective> result;
  result.trace.resize(candidates.size());
  for_each_candidate(candidates.size(), options.exec, [&](std::size_t i) {
    block_histogram hist(universe);
    result.trace[i] = {candidates[i], mean_entropy_with(hist, ids, candidates[i])};
  });
  if (counters) {
    for (auto b : candidates) counters->element_visits += (ids.size() / b) * b;
  }

  result.best = result.trace.front();
  for (const auto& c : result.trace) {
    if (c.mean_entropy < result.best.mean_entropy) result.best = c;
  }
  return result;
}

entropy_objective optimal_indirect_block_size(std::span<const value_id> ids,
                                              const sweep_options& options) {
  return sweep_indirect_block_sizes(ids, options).best;
}

}  // namespace bcc

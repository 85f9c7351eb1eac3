#include "bcc/heuristic.hpp"

#include <algorithm>
#include <unordered_map>

#include "bcc/error.hpp"

namespace bcc {

void heuristic_params::validate() const {
  if (!(x > 1.0)) throw error(errc::invalid_argument, "x must be > 1");
  if (!(y > 1.0)) throw error(errc::invalid_argument, "y must be > 1");
  if (!(z > 0.0 && z < 1.0)) throw error(errc::invalid_argument, "z must be in (0, 1)");
}

std::string_view decision_name(decision_kind k) noexcept {
  switch (k) {
    case decision_kind::no_compression: return "NoCompression";
    case decision_kind::affine_rle: return "AffineRle";
    case decision_kind::rle: return "Rle";
    case decision_kind::prefix: return "Prefix";
    case decision_kind::sparse: return "Sparse";
    case decision_kind::cluster: return "Cluster";
    case decision_kind::indirect: return "Indirect";
  }
  return "Unknown";
}

scheme scheme_for(decision_kind k) noexcept {
  switch (k) {
    case decision_kind::no_compression: return scheme::raw;
    case decision_kind::affine_rle: return scheme::affine;
    case decision_kind::rle: return scheme::rle;
    case decision_kind::prefix: return scheme::prefix;
    case decision_kind::sparse: return scheme::sparse;
    case decision_kind::cluster: return scheme::cluster;
    case decision_kind::indirect: return scheme::indirect;
  }
  return scheme::raw;
}

std::uint64_t scheme_decision::block_size() const noexcept {
  if (kind == decision_kind::cluster && cluster) return cluster->block_size;
  if (kind == decision_kind::indirect && indirect) return indirect->block_size;
  return 0;
}

std::optional<scheme_traits> traits_of(scheme s) noexcept {
  switch (s) {
    case scheme::prefix: return scheme_traits{"NO", "*", "YES", "NO"};
    case scheme::rle: return scheme_traits{"NO", "YES", "NO", "NO"};
    case scheme::cluster: return scheme_traits{"YES", "*", "NO", "YES"};
    case scheme::sparse: return scheme_traits{"NO", "NO", "YES", "YES"};
    case scheme::indirect: return scheme_traits{"YES", "NO", "NO", "YES"};
    default: return std::nullopt;
  }
}

column_stats compute_stats(std::span<const value_id> ids) {
  if (ids.empty()) throw error(errc::empty_column, "cannot compute statistics of an empty column");
  column_stats s;
  s.n = ids.size();
  s.is_sorted = std::is_sorted(ids.begin(), ids.end());

  if (ids.size() >= 2) {
    const std::int64_t step = std::int64_t{ids[1]} - std::int64_t{ids[0]};
    s.is_sequential = step == 1 || step == -1;
    for (std::size_t i = 2; s.is_sequential && i < ids.size(); ++i) {
      s.is_sequential = std::int64_t{ids[i]} - std::int64_t{ids[i - 1]} == step;
    }
  }

  while (s.leading_run < ids.size() && ids[s.leading_run] == ids[0]) ++s.leading_run;

  // group by id, count(*)
  std::unordered_map<value_id, std::uint64_t> freq;
  freq.reserve(std::min<std::size_t>(ids.size(), 1 << 20));
  for (value_id v : ids) {
    const std::uint64_t f = ++freq[v];
    s.max_freq = std::max(s.max_freq, f);
  }
  s.distinct = freq.size();
  s.avg_freq = static_cast<double>(s.n) / static_cast<double>(s.distinct);
  s.sparsity = static_cast<double>(s.max_freq) / s.avg_freq;
  return s;
}

scheme_decision decide_scheme(const column_stats& stats, std::span<const value_id> ids,
                              const heuristic_params& params, const sweep_options& options) {
  scheme_decision d;
  d.stats = stats;

  if (stats.distinct == stats.n) {
    d.kind = stats.is_sequential ? decision_kind::affine_rle : decision_kind::no_compression;
    return d;
  }
  if (stats.is_sorted) {
    d.kind = decision_kind::rle;
    return d;
  }
  if (stats.leading_run > 2 && stats.distinct > 1) {
    d.kind = decision_kind::prefix;
    return d;
  }
  if (stats.sparsity > params.x) {
    d.kind = decision_kind::sparse;
    return d;
  }
  if (stats.avg_repetition() > params.y) {
    d.cluster = optimal_cluster_block_size(ids, options);
    d.cluster_coverage = static_cast<double>(d.cluster->clustered_blocks) *
                         static_cast<double>(d.cluster->block_size) /
                         static_cast<double>(stats.n);
    if (*d.cluster_coverage > params.z) {
      d.kind = decision_kind::cluster;
    } else {
      d.kind = decision_kind::indirect;
      d.indirect = optimal_indirect_block_size(ids, options);
    }
    return d;
  }
  d.kind = decision_kind::no_compression;
  return d;
}

}  // namespace bcc

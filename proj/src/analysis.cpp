#include "bcc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bcc/column_io.hpp"
#include "bcc/error.hpp"

namespace bcc {

namespace {

using json = nlohmann::ordered_json;

std::optional<encoded_column> try_encode(const value_id_array& ids, scheme s, std::uint64_t b) {
  try {
    return encode(ids, s, b);
  } catch (const error&) {
    return std::nullopt;
  }
}

json optional_objective(const std::optional<cluster_objective>& c) {
  if (!c) return nullptr;
  return json{{"b", c->block_size}, {"S", c->clustered_blocks}, {"F", c->objective}};
}

}  // namespace

analyze_report analyze(const dictionary& dict, const value_id_array& ids,
                       const heuristic_params& params, const sweep_options& options) {
  params.validate();
  analyze_report r;
  r.params = params;
  r.sqrt_bound = options.sqrt_bound;
  r.id_width_bits = ids.id_width_bits;
  r.dict_count = dict.size();
  r.stats = compute_stats(ids.ids);
  r.decision = decide_scheme(r.stats, ids.ids, params, options);

  if (ids.size() >= 2) {
    auto cs = sweep_cluster_block_sizes(ids.ids, options);
    auto es = sweep_indirect_block_sizes(ids.ids, options);
    r.cluster_trace = std::move(cs.trace);
    r.entropy_trace = std::move(es.trace);
    r.cluster_block_size = cs.best.block_size;
    r.indirect_block_size = es.best.block_size;
  }

  for (int t = 0; t < scheme_count; ++t) {
    const auto s = static_cast<scheme>(t);
    std::uint64_t b = 0;
    if (s == scheme::cluster) b = r.cluster_block_size;
    if (s == scheme::indirect) b = r.indirect_block_size;
    if ((s == scheme::cluster || s == scheme::indirect) && b == 0) continue;
    if (auto e = try_encode(ids, s, b)) r.sizes_bits[t] = encoded_size_bits(*e);
  }
  return r;
}

std::string to_json(const analyze_report& r) {
  json stats{
      {"n", r.stats.n},
      {"distinct", r.stats.distinct},
      {"is_sorted", r.stats.is_sorted},
      {"is_sequential", r.stats.is_sequential},
      {"leading_run", r.stats.leading_run},
      {"max_freq", r.stats.max_freq},
      {"avg_freq", r.stats.avg_freq},
      {"sparsity", r.stats.sparsity},
      {"avg_repetition", r.stats.avg_repetition()},
  };

  json decision{
      {"scheme", decision_name(r.decision.kind)},
      {"block_size", r.decision.block_size()},
      {"cluster", optional_objective(r.decision.cluster)},
      {"cluster_coverage",
       r.decision.cluster_coverage ? json(*r.decision.cluster_coverage) : json(nullptr)},
      {"indirect", r.decision.indirect ? json{{"b", r.decision.indirect->block_size},
                                              {"mean_entropy", r.decision.indirect->mean_entropy}}
                                       : json(nullptr)},
  };
  if (auto t = traits_of(scheme_for(r.decision.kind))) {
    decision["traits"] = json{{"blocks", t->blocks},
                              {"sorting", t->sorting},
                              {"sparsity", t->sparsity},
                              {"prefix_combinable", t->prefix}};
  } else {
    decision["traits"] = nullptr;
  }

  json sizes = json::object();
  for (int t = 0; t < scheme_count; ++t) {
    const auto& v = r.sizes_bits[t];
    sizes[std::string(scheme_name(static_cast<scheme>(t)))] = v ? json(*v) : json(nullptr);
  }

  json cluster_trace = json::array();
  for (const auto& c : r.cluster_trace) {
    cluster_trace.push_back({{"b", c.block_size}, {"S", c.clustered_blocks}, {"F", c.objective}});
  }
  json entropy_trace = json::array();
  for (const auto& e : r.entropy_trace) {
    entropy_trace.push_back({{"b", e.block_size}, {"mean_entropy", e.mean_entropy}});
  }

  json doc{
      {"parameters", {{"x", r.params.x}, {"y", r.params.y}, {"z", r.params.z},
                      {"sqrt_bound", r.sqrt_bound}}},
      {"dictionary", {{"count", r.dict_count}, {"id_width_bits", r.id_width_bits}}},
      {"stats", stats},
      {"decision", decision},
      {"sizes_bits", sizes},
      {"block_sizes", {{"cluster", r.cluster_block_size}, {"indirect", r.indirect_block_size}}},
      {"cluster_trace", cluster_trace},
      {"entropy_trace", entropy_trace},
  };
  return doc.dump(2) + "\n";
}

namespace {

// Mean block entropy computed straight from per-block histograms.
double histogram_mean_entropy(std::span<const value_id> ids, std::uint64_t b) {
  double sum = 0.0;
  for (std::uint64_t begin = 0; begin + b <= ids.size(); begin += b) {
    std::map<value_id, std::uint64_t> hist;
    for (std::uint64_t i = begin; i < begin + b; ++i) ++hist[ids[i]];
    double h = 0.0;
    for (const auto& [v, c] : hist) {
      const double p = static_cast<double>(c) / static_cast<double>(b);
      h -= p * std::log2(p);
    }
    sum += h / std::log2(static_cast<double>(b));
  }
  return sum / std::ceil(static_cast<double>(ids.size()) / static_cast<double>(b));
}

id_interval random_interval(std::mt19937_64& rng, std::uint64_t dict_count) {
  std::uniform_int_distribution<std::uint64_t> pick(0, dict_count);
  std::uniform_int_distribution<int> mode(0, 5);
  auto bound = [&]() -> std::optional<id_bound> {
    const auto v = pick(rng);
    if (v == dict_count) return std::nullopt;
    return id_bound{static_cast<value_id>(v), mode(rng) % 2 == 0};
  };
  switch (mode(rng)) {
    case 0: return id_interval::all();
    case 1: return id_interval::none();
    default: return id_interval::between(bound(), bound());
  }
}

}  // namespace

std::vector<verify_check> verify_column(std::span<const std::string> values,
                                        const verify_options& options) {
  options.params.validate();
  std::vector<verify_check> checks;
  auto record = [&](std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };

  auto [dict, ids] = encode_column(values);
  const auto decoded_values = decode_column(dict, ids);
  record("dictionary round-trip",
         std::equal(decoded_values.begin(), decoded_values.end(), values.begin(), values.end()));

  const std::uint64_t n = ids.size();
  const auto candidates = candidate_block_sizes(n, options.sweep.sqrt_bound);

  std::uint64_t cluster_b = 0;
  std::uint64_t indirect_b = 0;
  if (n >= 2) {
    // Run-length recurrence against the block walk.
    const auto runs = to_runs(ids.ids);
    std::uint64_t mismatches = 0;
    cluster_objective brute{};
    bool first = true;
    for (auto b : candidates) {
      const auto s_dp = clustered_block_count(runs, b);
      const auto s_oracle = clustered_block_count_oracle(ids.ids, b);
      mismatches += s_dp != s_oracle;
      const cluster_objective c{b, s_oracle, s_oracle * (b - 1)};
      if (first || c.objective > brute.objective) brute = c;
      first = false;
    }
    record("S_DP = S_oracle for all candidate b", mismatches == 0,
           std::to_string(candidates.size()) + " candidates, " + std::to_string(mismatches) +
               " mismatches");

    const auto serial_opts = sweep_options{options.sweep.sqrt_bound, execution::serial};
    const auto parallel_opts = sweep_options{options.sweep.sqrt_bound, execution::parallel};
    const auto cs = sweep_cluster_block_sizes(ids.ids, serial_opts);
    record("cluster optimizer = exhaustive argmax", cs.best == brute,
           "b*=" + std::to_string(cs.best.block_size) + " F=" + std::to_string(cs.best.objective));
    record("cluster sweep parallel = serial",
           sweep_cluster_block_sizes(ids.ids, parallel_opts).trace == cs.trace);
    cluster_b = cs.best.block_size;

    const auto es = sweep_indirect_block_sizes(ids.ids, serial_opts);
    double worst = 0.0;
    entropy_objective brute_e{};
    first = true;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double h = histogram_mean_entropy(ids.ids, candidates[i]);
      worst = std::max(worst, std::abs(h - es.trace[i].mean_entropy));
      if (first || es.trace[i].mean_entropy < brute_e.mean_entropy) brute_e = es.trace[i];
      first = false;
    }
    record("mean block entropy = histogram oracle", worst <= 1e-9,
           "max abs diff " + std::to_string(worst));
    record("indirect optimizer = exhaustive argmin", es.best == brute_e,
           "b*=" + std::to_string(es.best.block_size));
    record("entropy sweep parallel = serial",
           sweep_indirect_block_sizes(ids.ids, parallel_opts).trace == es.trace);
    indirect_b = es.best.block_size;

    std::uint64_t law_failures = 0;
    for (auto b : candidates) {
      const auto e = encode(ids, scheme::cluster, b);
      const auto s = clustered_block_count_oracle(ids.ids, b);
      const auto size = size_of(e);
      law_failures += size.id_bits != (n - s * (b - 1)) * ids.id_width_bits ||
                      size.flag_bits != (n + b - 1) / b;
    }
    record("cluster size = (N - S(b-1))*width + ceil(N/b)", law_failures == 0,
           std::to_string(law_failures) + " failures");
  }

  std::mt19937_64 rng(options.seed);
  for (int t = 0; t < scheme_count; ++t) {
    const auto s = static_cast<scheme>(t);
    std::uint64_t b = s == scheme::cluster ? cluster_b : s == scheme::indirect ? indirect_b : 0;
    if ((s == scheme::cluster || s == scheme::indirect) && b == 0) continue;
    std::optional<encoded_column> e;
    try {
      e = encode(ids, s, b);
    } catch (const error& ex) {
      if (ex.code() == errc::not_affine) continue;  // not applicable
      record(std::string(scheme_name(s)) + " encode", false, ex.what());
      continue;
    }
    const std::string label(scheme_name(s));

    auto back = decode(*e);
    if (options.inject_fault && !back.ids.empty()) back.ids[0] ^= 1u;
    record(label + " round-trip", back == ids);

    bool io_ok = false;
    std::string io_detail;
    try {
      const auto bytes = serialize(dict, *e);
      const auto [d2, e2] = deserialize(bytes);
      io_ok = d2 == dict && e2 == *e && serialize(d2, e2) == bytes &&
              bytes.size() == expected_file_bytes(dict, *e);
      io_detail = std::to_string(bytes.size()) + " bytes";
    } catch (const error& ex) {
      io_detail = ex.what();
    }
    record(label + " file round-trip and size", io_ok, io_detail);

    std::uint64_t scan_failures = 0;
    for (std::size_t trial = 0; trial < options.scan_trials; ++trial) {
      const auto iv = random_interval(rng, dict.size());
      std::vector<std::uint64_t> want;
      for (std::uint64_t i = 0; i < n; ++i) {
        if (iv.contains(ids.ids[i])) want.push_back(i);
      }
      scan_failures += scan_id_range(*e, iv) != want;
    }
    record(label + " scan = decode-then-filter", scan_failures == 0,
           std::to_string(options.scan_trials) + " intervals");
  }

  const auto stats = compute_stats(ids.ids);
  const auto d = decide_scheme(stats, ids.ids, options.params, options.sweep);
  bool consistent = true;
  if (d.kind == decision_kind::cluster) consistent = *d.cluster_coverage > options.params.z;
  record("decision consistent", consistent, std::string(decision_name(d.kind)));
  return checks;
}

}  // namespace bcc

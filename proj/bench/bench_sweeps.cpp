// Serial reference vs OpenMP candidate sweeps for both block-size optimizers.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "bcc/block_optimizer.hpp"

namespace {

std::vector<bcc::value_id> zipf_ids(std::size_t n) {
  std::mt19937_64 rng(42);
  std::vector<double> w(1000);
  for (std::size_t r = 0; r < w.size(); ++r) w[r] = 1.0 / std::pow(double(r + 1), 1.2);
  std::discrete_distribution<bcc::value_id> d(w.begin(), w.end());
  std::vector<bcc::value_id> ids(n);
  for (auto& v : ids) v = d(rng);
  return ids;
}

template <bcc::execution Exec>
void cluster_sweep(benchmark::State& state) {
  const auto ids = zipf_ids(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcc::sweep_cluster_block_sizes(ids, {false, Exec}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bcc::execution Exec>
void entropy_sweep(benchmark::State& state) {
  const auto ids = zipf_ids(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcc::sweep_indirect_block_sizes(ids, {false, Exec}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(cluster_sweep<bcc::execution::serial>)->RangeMultiplier(10)->Range(10'000, 1'000'000);
BENCHMARK(cluster_sweep<bcc::execution::parallel>)->RangeMultiplier(10)->Range(10'000, 1'000'000);
BENCHMARK(entropy_sweep<bcc::execution::serial>)->RangeMultiplier(10)->Range(10'000, 1'000'000);
BENCHMARK(entropy_sweep<bcc::execution::parallel>)->RangeMultiplier(10)->Range(10'000, 1'000'000);

BENCHMARK_MAIN();

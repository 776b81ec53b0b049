#include <benchmark/benchmark.h>

#include "trajeval/association.hpp"
#include "trajeval/random.hpp"

using namespace trajeval;

namespace {

// Reference at 30 Hz and estimate at 20 Hz with clock jitter.
std::pair<Trajectory, Trajectory> streams(std::size_t n) {
  Rng rng(3);
  std::vector<StampedPose> ref;
  std::vector<StampedPose> est;
  for (std::size_t i = 0; i < n; ++i) {
    ref.push_back({static_cast<double>(i) / 30.0, Pose()});
  }
  for (std::size_t i = 0; i < 2 * n / 3; ++i) {
    est.push_back({static_cast<double>(i) / 20.0 + rng.uniform(0.0, 0.004), Pose()});
  }
  return {Trajectory(std::move(ref)), Trajectory(std::move(est))};
}

void BM_Associate(benchmark::State& state) {
  const auto [ref, est] = streams(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(associate(ref, est));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Associate)->RangeMultiplier(10)->Range(100, 100000);

}  // namespace

BENCHMARK_MAIN();

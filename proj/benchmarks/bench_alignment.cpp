#include <benchmark/benchmark.h>

#include "trajeval/alignment.hpp"
#include "trajeval/association.hpp"
#include "trajeval/random.hpp"
#include "trajeval/synthgen.hpp"

using namespace trajeval;

namespace {

SynthPair pair_of_size(std::size_t n) {
  SynthSpec spec;
  spec.shape = SynthShape::kRandomWalk;
  spec.n = n;
  spec.seed = 7;
  spec.noise_sigma_t = 0.05;
  spec.noise_sigma_r = 0.01;
  spec.applied_transform = SimilarityTransform(1.7, so3_exp(Vec3(0.3, -0.2, 0.9)), Vec3(1, 2, 3));
  return generate(spec);
}

void BM_Umeyama(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(1);
  Eigen::Matrix3Xd x(3, n);
  for (Eigen::Index i = 0; i < n; ++i) x.col(i) = Vec3(rng.normal(), rng.normal(), rng.normal());
  const Eigen::Matrix3Xd y = ((2.0 * so3_exp(Vec3(0.1, 0.2, 0.3)).matrix()) * x).colwise() +
                             Vec3(1.0, -1.0, 0.5);
  const PointSet px(x);
  const PointSet py(y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(umeyama_align(px, py, true));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Umeyama)->RangeMultiplier(10)->Range(10, 100000);

void BM_AlignTrajectories(benchmark::State& state) {
  const SynthPair p = pair_of_size(static_cast<std::size_t>(state.range(0)));
  const Correspondences corr = associate(p.ground_truth, p.estimate);
  const auto mode = static_cast<AlignmentMode>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(align_trajectories(p.estimate, p.ground_truth, corr, mode));
  }
  state.SetLabel(std::string(to_string(mode)));
}
BENCHMARK(BM_AlignTrajectories)
    ->ArgsProduct({{1000, 10000},
                   {static_cast<int>(AlignmentMode::kSe3), static_cast<int>(AlignmentMode::kSim3),
                    static_cast<int>(AlignmentMode::kSim3Golden)}});

}  // namespace

BENCHMARK_MAIN();

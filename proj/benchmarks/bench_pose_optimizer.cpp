#include <benchmark/benchmark.h>

#include "trajeval/pose_optimizer.hpp"
#include "trajeval/synthgen.hpp"

using namespace trajeval;

namespace {

void BM_MotionOnlyBa(benchmark::State& state) {
  SceneSpec spec;
  spec.n_points = static_cast<std::size_t>(state.range(0));
  spec.seed = 11;
  spec.stereo = state.range(1) != 0;
  spec.pixel_noise_sigma = 0.5;
  spec.outlier_fraction = 0.2;
  const Scene scene = generate_scene(spec);
  const Pose init = se3_exp(Twist((Vec6() << 0.05, -0.03, 0.02, 0.01, 0.02, -0.01).finished())) *
                    scene.world_to_camera;
  const RobustCost robust{spec.stereo ? kHuberDeltaStereo : kHuberDeltaMono};
  for (auto _ : state) {
    benchmark::DoNotOptimize(motion_only_ba(scene.observations, scene.camera, init, robust));
  }
  state.SetLabel(spec.stereo ? "stereo" : "mono");
}
BENCHMARK(BM_MotionOnlyBa)->ArgsProduct({{50, 200, 1000}, {0, 1}});

void BM_ResidualAndJacobian(benchmark::State& state) {
  SceneSpec spec;
  spec.n_points = 100;
  const Scene scene = generate_scene(spec);
  for (auto _ : state) {
    for (const Observation& obs : scene.observations) {
      benchmark::DoNotOptimize(residual_and_jacobian(obs, scene.camera, scene.world_to_camera));
    }
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_ResidualAndJacobian);

}  // namespace

BENCHMARK_MAIN();

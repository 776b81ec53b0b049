#pragma once

// Deterministic synthetic data: trajectory pairs with a known similarity
// transform and noise, and pose-estimation scenes with known camera pose.
// Everything is drawn from trajeval::Rng, so equal seeds give bit-identical
// output.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "trajeval/geometry.hpp"
#include "trajeval/parsers.hpp"
#include "trajeval/pose_optimizer.hpp"

namespace trajeval {

enum class SynthShape { kLine, kCircle, kRandomWalk };

std::string_view to_string(SynthShape shape);
std::optional<SynthShape> synth_shape_from_string(std::string_view name);

/// Circle radius (m) and line velocity (m/s) used by the generator.
inline constexpr double kSynthCircleRadius = 5.0;

struct SynthSpec {
  SynthShape shape = SynthShape::kCircle;
  std::size_t n = 100;
  double dt = 0.1;  // s
  std::uint64_t seed = 0;
  double noise_sigma_t = 0.0;  // m, per axis
  double noise_sigma_r = 0.0;  // rad
  SimilarityTransform applied_transform;

  /// Throws Error(kInvalidArgument) unless n >= 2, dt > 0, sigmas >= 0.
  void validate() const;
};

struct SynthPair {
  Trajectory ground_truth;
  Trajectory estimate;
};

/// Ground truth follows `shape` with stamps i * dt:
///   line        constant velocity (1, 0.5, 0.25) m/s, fixed orientation
///   circle      one revolution of radius 5 m in the z = 0 plane, heading
///               tangent to the circle
///   random_walk velocity ~ N(0, 1) m/s per axis, orientation increments
///               ~ N(0, 0.1 dt) rad per axis
/// The estimate is applied_transform * ground_truth, then each pose gets
/// translation noise N(0, sigma_t) per axis and a left rotation about a
/// random axis by an angle ~ N(0, sigma_r).
///
/// Stream layout: all shape draws (random_walk: 3 velocity then 3 rotation
/// normals per step), then per pose 3 translation normals, 3 axis normals
/// and 1 angle normal. Noise draws happen even when a sigma is zero.
SynthPair generate(const SynthSpec& spec);

struct SceneSpec {
  std::size_t n_points = 20;
  std::uint64_t seed = 0;
  bool stereo = false;
  double pixel_noise_sigma = 0.0;
  double outlier_fraction = 0.0;  // share of keypoints replaced by random pixels
  double observation_sigma = 1.0;
  CameraIntrinsics camera{500.0, 500.0, 320.0, 240.0, 0.12};
  double image_width = 640.0;
  double image_height = 480.0;
  double min_depth = 2.0;
  double max_depth = 10.0;
};

struct Scene {
  Pose world_to_camera;
  CameraIntrinsics camera;
  std::vector<Observation> observations;
  std::vector<bool> corrupted;
};

/// Points are drawn uniformly over the image at uniform depths, lifted into
/// the world through a random true pose, and re-projected (plus optional
/// pixel noise). The first floor(outlier_fraction * n) indices of a seeded
/// shuffle are then replaced by uniform random pixels.
Scene generate_scene(const SceneSpec& spec);

}  // namespace trajeval

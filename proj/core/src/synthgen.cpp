#include "trajeval/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "trajeval/error.hpp"
#include "trajeval/random.hpp"

namespace trajeval {

namespace {

UnitQuaternion axis_angle(const Vec3& axis, double angle) {
  const double s = std::sin(0.5 * angle);
  return {std::cos(0.5 * angle), s * axis.x(), s * axis.y(), s * axis.z()};
}

UnitQuaternion exp_quaternion(const Vec3& omega) {
  const double angle = omega.norm();
  if (angle == 0.0) return UnitQuaternion::identity();
  return axis_angle(omega / angle, angle);
}

std::vector<StampedPose> ground_truth_poses(const SynthSpec& spec, Rng& rng) {
  std::vector<StampedPose> out;
  out.reserve(spec.n);
  const auto stamp = [&](std::size_t i) { return static_cast<double>(i) * spec.dt; };
  switch (spec.shape) {
    case SynthShape::kLine: {
      const Vec3 velocity(1.0, 0.5, 0.25);
      for (std::size_t i = 0; i < spec.n; ++i) {
        out.push_back({stamp(i), Pose::from_translation(stamp(i) * velocity)});
      }
      break;
    }
    case SynthShape::kCircle: {
      const Vec3 z_axis = Vec3::UnitZ();
      for (std::size_t i = 0; i < spec.n; ++i) {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(spec.n);
        const Vec3 p(kSynthCircleRadius * std::cos(theta), kSynthCircleRadius * std::sin(theta),
                     0.0);
        out.push_back({stamp(i), Pose(axis_angle(z_axis, theta + 0.5 * std::numbers::pi), p)});
      }
      break;
    }
    case SynthShape::kRandomWalk: {
      Vec3 p = Vec3::Zero();
      UnitQuaternion q;
      out.push_back({0.0, Pose(q, p)});
      for (std::size_t i = 1; i < spec.n; ++i) {
        Vec3 v;
        for (int k = 0; k < 3; ++k) v[k] = rng.normal();
        Vec3 w;
        for (int k = 0; k < 3; ++k) w[k] = rng.normal(0.0, 0.1 * spec.dt);
        p += spec.dt * v;
        q = exp_quaternion(w) * q;
        out.push_back({stamp(i), Pose(q, p)});
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(SynthShape shape) {
  switch (shape) {
    case SynthShape::kLine: return "line";
    case SynthShape::kCircle: return "circle";
    case SynthShape::kRandomWalk: return "random_walk";
  }
  return "circle";
}

std::optional<SynthShape> synth_shape_from_string(std::string_view name) {
  if (name == "line") return SynthShape::kLine;
  if (name == "circle") return SynthShape::kCircle;
  if (name == "random_walk") return SynthShape::kRandomWalk;
  return std::nullopt;
}

void SynthSpec::validate() const {
  if (n < 2) {
    throw Error(ErrorKind::kInvalidArgument, "synthetic trajectory needs n >= 2 poses");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::kInvalidArgument, "dt must be positive");
  }
  if (!(noise_sigma_t >= 0.0) || !(noise_sigma_r >= 0.0) || !std::isfinite(noise_sigma_t) ||
      !std::isfinite(noise_sigma_r)) {
    throw Error(ErrorKind::kInvalidArgument, "noise sigmas must be >= 0");
  }
}

SynthPair generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<StampedPose> gt = ground_truth_poses(spec, rng);

  const SimilarityTransform& t = spec.applied_transform;
  const UnitQuaternion qt = rotmat_to_quat(t.rotation());
  std::vector<StampedPose> est;
  est.reserve(gt.size());
  for (const StampedPose& sp : gt) {
    Vec3 dp;
    for (int k = 0; k < 3; ++k) dp[k] = rng.normal();
    const Vec3 axis = rng.unit_vector();
    const double angle = rng.normal() * spec.noise_sigma_r;
    const Vec3 p = t.apply(sp.pose.translation()) + spec.noise_sigma_t * dp;
    const UnitQuaternion q = axis_angle(axis, angle) * (qt * sp.pose.orientation());
    est.push_back({sp.timestamp, Pose(q, p)});
  }
  return {Trajectory(std::move(gt), TrajectoryFormat::kTum, "ground_truth"),
          Trajectory(std::move(est), TrajectoryFormat::kTum, "estimate")};
}

Scene generate_scene(const SceneSpec& spec) {
  spec.camera.validate();
  if (spec.n_points < 3) {
    throw Error(ErrorKind::kInvalidArgument, "scene needs at least 3 points");
  }
  if (!(spec.outlier_fraction >= 0.0 && spec.outlier_fraction <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "outlier fraction must lie in [0, 1]");
  }
  if (spec.stereo && !(spec.camera.baseline > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "not a stereo camera");
  }
  Rng rng(spec.seed);
  const CameraIntrinsics& k = spec.camera;

  const Vec3 axis = rng.unit_vector();
  const double angle = rng.uniform(0.0, 0.5);
  Vec3 trans;
  for (int i = 0; i < 3; ++i) trans[i] = rng.normal();
  Scene scene{Pose(axis_angle(axis, angle), trans), k, {}, {}};
  const Pose camera_to_world = scene.world_to_camera.inverse();

  std::vector<Vec3> keypoints;
  std::vector<Vec3> world;
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    const double u = rng.uniform(0.0, spec.image_width);
    const double v = rng.uniform(0.0, spec.image_height);
    const double z = rng.uniform(spec.min_depth, spec.max_depth);
    const Vec3 p_cam((u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z);
    world.push_back(camera_to_world.apply(p_cam));
    Vec3 kp = spec.stereo ? project_stereo(p_cam, k) : Vec3(u, v, 0.0);
    if (!spec.stereo) kp.head<2>() = project_mono(p_cam, k);
    for (int c = 0; c < (spec.stereo ? 3 : 2); ++c) {
      kp[c] += rng.normal() * spec.pixel_noise_sigma;
    }
    keypoints.push_back(kp);
  }

  std::vector<std::size_t> order(spec.n_points);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.index(i)]);
  }
  const auto n_out = static_cast<std::size_t>(
      std::floor(spec.outlier_fraction * static_cast<double>(spec.n_points)));
  scene.corrupted.assign(spec.n_points, false);
  for (std::size_t j = 0; j < n_out; ++j) {
    const std::size_t i = order[j];
    scene.corrupted[i] = true;
    keypoints[i].x() = rng.uniform(0.0, spec.image_width);
    keypoints[i].y() = rng.uniform(0.0, spec.image_height);
    if (spec.stereo) keypoints[i].z() = keypoints[i].x() - rng.uniform(0.0, 64.0);
  }

  for (std::size_t i = 0; i < spec.n_points; ++i) {
    scene.observations.push_back(
        spec.stereo ? Observation::stereo(world[i], keypoints[i], spec.observation_sigma)
                    : Observation::mono(world[i], keypoints[i].head<2>(),
                                        spec.observation_sigma));
  }
  return scene;
}

}  // namespace trajeval

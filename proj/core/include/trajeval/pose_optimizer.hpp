#pragma once

// Motion-only bundle adjustment: estimate a single camera pose (world to
// camera) from fixed 3D points and their keypoint measurements,
//
//   {R, t} = argmin sum_i rho( |x_i - pi(R X_i + t)|^2_Sigma )
//
// with pi the monocular or rectified-stereo pinhole projection, Sigma =
// sigma_i^2 I, and rho the Huber cost. Solved with Levenberg-Marquardt over
// left-multiplicative SE(3) updates.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "trajeval/geometry.hpp"

namespace trajeval {

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double baseline = 0.0;  // m; zero for a monocular camera

  /// Throws Error(kInvalidArgument) unless fx, fy > 0 and baseline >= 0.
  void validate() const;
};

/// Points closer than this along the optical axis are "behind camera".
inline constexpr double kMinDepth = 1e-9;

/// (fx X/Z + cx, fy Y/Z + cy). Throws Error(kBehindCamera) for Z <= 1e-9.
Vec2 project_mono(const Vec3& p_cam, const CameraIntrinsics& k);

/// (u_L, v_L, u_R) with u_R = fx (X - b)/Z + cx. Throws Error(kBehindCamera)
/// for Z <= 1e-9 and Error(kInvalidArgument, "not a stereo camera") for b == 0.
Vec3 project_stereo(const Vec3& p_cam, const CameraIntrinsics& k);

struct HuberCost {
  double cost;
  double weight;  // d cost / d r2
};

/// rho(r2) = r2 inside the threshold, 2 delta sqrt(r2) - delta^2 outside.
HuberCost huber_cost(double r2, double delta);

/// Conventional 95% chi-square thresholds (as a residual norm) for 2 and 3
/// degrees of freedom.
inline constexpr double kHuberDeltaMono = 2.447;
inline constexpr double kHuberDeltaStereo = 2.796;

class Observation {
 public:
  /// Throws Error(kInvalidArgument) if sigma <= 0 or inputs are non-finite.
  static Observation mono(const Vec3& world_point, const Vec2& keypoint, double sigma);
  static Observation stereo(const Vec3& world_point, const Vec3& keypoint, double sigma);

  const Vec3& world_point() const { return world_point_; }
  bool is_stereo() const { return stereo_; }
  int dimension() const { return stereo_ ? 3 : 2; }
  /// Mono observations use the first two components.
  const Vec3& keypoint() const { return keypoint_; }
  double sigma() const { return sigma_; }

 private:
  Observation(const Vec3& x, const Vec3& kp, bool stereo, double sigma);

  Vec3 world_point_;
  Vec3 keypoint_;
  bool stereo_;
  double sigma_;
};

struct RobustCost {
  double delta = kHuberDeltaMono;  // on the whitened residual norm
};

struct SolverParams {
  int max_iters = 50;
  double initial_damping = 1e-3;
  double damping_up = 10.0;
  double damping_down = 0.1;
  double step_tolerance = 1e-10;
  double relative_cost_tolerance = 1e-12;
  /// After each solve, observations are re-classified by the inlier test and
  /// the solve repeats on the inliers only, until the set stops changing or
  /// this many extra solves have run. 0 gives a single pure Huber solve.
  /// max_iters is a budget shared by all solves.
  int rejection_rounds = 3;
};

/// Whitened residual (x - pi(R X + t)) / sigma and its Jacobian with respect
/// to a left twist perturbation exp(xi) * pose. Rows beyond dimension() are
/// zero. Throws Error(kBehindCamera) when the point is not in front.
struct ResidualJacobian {
  Vec3 residual = Vec3::Zero();
  Eigen::Matrix<double, 3, 6> jacobian = Eigen::Matrix<double, 3, 6>::Zero();
};
ResidualJacobian residual_and_jacobian(const Observation& obs, const CameraIntrinsics& k,
                                       const Pose& world_to_camera);

/// sum_i rho(|r_i|^2) over observations in front of the camera; without a
/// robust cost the plain squared whitened residuals are summed.
double reprojection_cost(std::span<const Observation> observations, const CameraIntrinsics& k,
                         const Pose& world_to_camera, const RobustCost* robust);

struct PoseEstimate {
  Pose pose;
  double final_cost = 0.0;  // robust cost over the last active set
  int iterations = 0;
  bool converged = false;
  /// Whitened residual norm <= delta at the solution (and in front of camera).
  std::vector<bool> inlier_mask;
};

/// Observations behind the camera at the initial pose are left out of the
/// first solve; steps that would move an active point behind the camera are
/// rejected like any cost increase.
///
/// Errors: fewer than 3 observations -> kUnderdetermined; every point behind
/// the camera at `initial` -> kBehindCamera "bad initialization". Hitting
/// max_iters returns with converged = false.
PoseEstimate motion_only_ba(std::span<const Observation> observations,
                            const CameraIntrinsics& k, const Pose& initial,
                            const RobustCost& robust = {}, const SolverParams& params = {});

}  // namespace trajeval

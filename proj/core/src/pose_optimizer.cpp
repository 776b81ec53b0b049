#include "trajeval/pose_optimizer.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>

#include "trajeval/error.hpp"

namespace trajeval {

namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;

constexpr double kMaxDamping = 1e16;

void check_depth(const Vec3& p_cam) {
  if (!(p_cam.z() > kMinDepth)) {
    throw Error(ErrorKind::kBehindCamera, "behind camera");
  }
}

Vec3 predict(const Observation& obs, const CameraIntrinsics& k, const Vec3& p_cam) {
  if (obs.is_stereo()) return project_stereo(p_cam, k);
  Vec3 out = Vec3::Zero();
  out.head<2>() = project_mono(p_cam, k);
  return out;
}

double robust_term(double r2, const RobustCost* robust) {
  return robust ? huber_cost(r2, robust->delta).cost : r2;
}

// Cost over the active set; +inf if an active point left the front of the
// camera.
double active_cost(std::span<const Observation> obs, const std::vector<bool>& active,
                   const CameraIntrinsics& k, const Pose& pose, const RobustCost& robust) {
  double sum = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!active[i]) continue;
    const Vec3 p = pose.apply(obs[i].world_point());
    if (!(p.z() > kMinDepth)) return std::numeric_limits<double>::infinity();
    const Vec3 r = (obs[i].keypoint() - predict(obs[i], k, p)) / obs[i].sigma();
    sum += robust_term(r.squaredNorm(), &robust);
  }
  return sum;
}

}  // namespace

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
    throw Error(ErrorKind::kInvalidArgument, "focal lengths must be positive");
  }
  if (!(baseline >= 0.0) || !std::isfinite(baseline) || !std::isfinite(cx) ||
      !std::isfinite(cy)) {
    throw Error(ErrorKind::kInvalidArgument, "invalid camera intrinsics");
  }
}

Vec2 project_mono(const Vec3& p, const CameraIntrinsics& k) {
  check_depth(p);
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy};
}

Vec3 project_stereo(const Vec3& p, const CameraIntrinsics& k) {
  if (k.baseline == 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "not a stereo camera");
  }
  check_depth(p);
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy,
          k.fx * (p.x() - k.baseline) / p.z() + k.cx};
}

HuberCost huber_cost(double r2, double delta) {
  const double r = std::sqrt(r2);
  if (r <= delta) return {r2, 1.0};
  return {2.0 * delta * r - delta * delta, delta / r};
}

Observation::Observation(const Vec3& x, const Vec3& kp, bool stereo, double sigma)
    : world_point_(x), keypoint_(kp), stereo_(stereo), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::kInvalidArgument, "observation sigma must be positive");
  }
  if (!x.allFinite() || !kp.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "observation has non-finite values");
  }
}

Observation Observation::mono(const Vec3& world_point, const Vec2& keypoint, double sigma) {
  return {world_point, Vec3(keypoint.x(), keypoint.y(), 0.0), false, sigma};
}

Observation Observation::stereo(const Vec3& world_point, const Vec3& keypoint, double sigma) {
  return {world_point, keypoint, true, sigma};
}

ResidualJacobian residual_and_jacobian(const Observation& obs, const CameraIntrinsics& k,
                                       const Pose& world_to_camera) {
  const Vec3 p = world_to_camera.apply(obs.world_point());
  ResidualJacobian out;
  const double inv_sigma = 1.0 / obs.sigma();
  out.residual = (obs.keypoint() - predict(obs, k, p)) * inv_sigma;

  const double iz = 1.0 / p.z();
  const double iz2 = iz * iz;
  Eigen::Matrix<double, 3, 3> d_proj = Eigen::Matrix3d::Zero();
  d_proj.row(0) << k.fx * iz, 0.0, -k.fx * p.x() * iz2;
  d_proj.row(1) << 0.0, k.fy * iz, -k.fy * p.y() * iz2;
  if (obs.is_stereo()) {
    d_proj.row(2) << k.fx * iz, 0.0, -k.fx * (p.x() - k.baseline) * iz2;
  }
  // d p / d xi for p' = exp(xi) p: [-hat(p) | I].
  Eigen::Matrix<double, 3, 6> d_point;
  d_point << -hat(p), Eigen::Matrix3d::Identity();
  out.jacobian = -inv_sigma * d_proj * d_point;
  return out;
}

double reprojection_cost(std::span<const Observation> observations, const CameraIntrinsics& k,
                         const Pose& world_to_camera, const RobustCost* robust) {
  double sum = 0.0;
  for (const Observation& obs : observations) {
    const Vec3 p = world_to_camera.apply(obs.world_point());
    if (!(p.z() > kMinDepth)) continue;
    const Vec3 r = (obs.keypoint() - predict(obs, k, p)) / obs.sigma();
    sum += robust_term(r.squaredNorm(), robust);
  }
  return sum;
}

namespace {

struct LmState {
  Pose pose;
  double cost = 0.0;
  int iterations = 0;  // shared budget across rejection rounds
  bool converged = false;
};

// Levenberg-Marquardt on the active set until convergence or the budget runs
// out.
void run_lm(std::span<const Observation> observations, const std::vector<bool>& active,
            const CameraIntrinsics& k, const RobustCost& robust, const SolverParams& params,
            LmState& st) {
  const std::size_t n = observations.size();
  st.converged = false;
  st.cost = active_cost(observations, active, k, st.pose, robust);
  double lambda = params.initial_damping;

  while (!st.converged && st.iterations < params.max_iters) {
    Mat6 h = Mat6::Zero();
    Vec6 g = Vec6::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const ResidualJacobian rj = residual_and_jacobian(observations[i], k, st.pose);
      const double w = huber_cost(rj.residual.squaredNorm(), robust.delta).weight;
      h.noalias() += w * rj.jacobian.transpose() * rj.jacobian;
      g.noalias() += w * rj.jacobian.transpose() * rj.residual;
    }
    const Vec6 diag = h.diagonal().cwiseMax(1e-12 * std::max(1.0, h.diagonal().maxCoeff()));

    // Inner loop: raise damping until a step lowers the cost.
    while (st.iterations < params.max_iters) {
      ++st.iterations;
      Mat6 a = h;
      a.diagonal() += lambda * diag;
      const Vec6 step = a.ldlt().solve(-g);
      if (!step.allFinite()) {
        throw Error(ErrorKind::kNumerical, "singular normal equations");
      }
      if (step.norm() < params.step_tolerance) {
        st.converged = true;
        break;
      }
      const Pose candidate = se3_exp(Twist(step)) * st.pose;
      const double new_cost = active_cost(observations, active, k, candidate, robust);
      if (new_cost < st.cost) {
        const double rel = (st.cost - new_cost) / st.cost;
        st.pose = candidate;
        st.cost = new_cost;
        lambda = std::max(lambda * params.damping_down, 1e-12);
        if (rel < params.relative_cost_tolerance) st.converged = true;
        break;
      }
      lambda *= params.damping_up;
      if (lambda > kMaxDamping) {
        // No descent direction left at machine precision.
        st.converged = true;
        break;
      }
    }
  }
}

// In front of the camera with whitened residual norm <= delta.
std::vector<bool> classify(std::span<const Observation> observations, const CameraIntrinsics& k,
                           const Pose& pose, double delta) {
  std::vector<bool> inlier(observations.size(), false);
  const double d2 = delta * delta;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const Vec3 p = pose.apply(observations[i].world_point());
    if (!(p.z() > kMinDepth)) continue;
    const Vec3 r = (observations[i].keypoint() - predict(observations[i], k, p)) /
                   observations[i].sigma();
    inlier[i] = r.squaredNorm() <= d2;
  }
  return inlier;
}

}  // namespace

PoseEstimate motion_only_ba(std::span<const Observation> observations,
                            const CameraIntrinsics& k, const Pose& initial,
                            const RobustCost& robust, const SolverParams& params) {
  k.validate();
  if (!(robust.delta > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "Huber delta must be positive");
  }
  if (params.max_iters <= 0 || !(params.initial_damping > 0.0) ||
      !(params.damping_up > 1.0) || !(params.damping_down > 0.0) ||
      !(params.damping_down < 1.0) || !(params.step_tolerance > 0.0) ||
      !(params.relative_cost_tolerance > 0.0) || params.rejection_rounds < 0) {
    throw Error(ErrorKind::kInvalidArgument, "invalid solver parameters");
  }
  if (observations.size() < 3) {
    throw Error(ErrorKind::kUnderdetermined, "underdetermined: need at least 3 observations");
  }
  for (const Observation& obs : observations) {
    if (obs.is_stereo() && k.baseline == 0.0) {
      throw Error(ErrorKind::kInvalidArgument, "not a stereo camera");
    }
  }

  const std::size_t n = observations.size();
  std::vector<bool> active(n);
  std::size_t n_active = 0;
  for (std::size_t i = 0; i < n; ++i) {
    active[i] = initial.apply(observations[i].world_point()).z() > kMinDepth;
    n_active += active[i] ? 1 : 0;
  }
  if (n_active == 0) {
    throw Error(ErrorKind::kBehindCamera, "bad initialization: all points behind camera");
  }

  LmState st;
  st.pose = initial;
  run_lm(observations, active, k, robust, params, st);
  for (int round = 0; round < params.rejection_rounds; ++round) {
    if (st.iterations >= params.max_iters) break;
    std::vector<bool> next = classify(observations, k, st.pose, robust.delta);
    const auto kept = static_cast<std::size_t>(std::count(next.begin(), next.end(), true));
    if (next == active || kept < 3) break;
    active = std::move(next);
    run_lm(observations, active, k, robust, params, st);
  }

  PoseEstimate out;
  out.pose = st.pose;
  out.final_cost = st.cost;
  out.iterations = st.iterations;
  out.converged = st.converged;
  out.inlier_mask = classify(observations, k, st.pose, robust.delta);
  return out;
}

}  // namespace trajeval

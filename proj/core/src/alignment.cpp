#include "trajeval/alignment.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "trajeval/error.hpp"
#include "trajeval/scalar_opt.hpp"

namespace trajeval {

namespace {

constexpr double kMinSourceVariance = 1e-12;
constexpr double kMinScale = 1e-3;
constexpr double kMaxScale = 1e3;

struct Moments {
  Vec3 mean_x;
  Vec3 mean_y;
  double var_x;     // (1/n) sum |x_i - mean_x|^2
  Mat3 cov_yx;      // (1/n) sum (y_i - mean_y)(x_i - mean_x)^T
};

Moments moments(const PointSet& x, const PointSet& y) {
  const Eigen::Index n = x.size();
  if (n != y.size()) {
    throw Error(ErrorKind::kUnderdetermined, "underdetermined: point sets differ in size");
  }
  if (n < 3) {
    throw Error(ErrorKind::kUnderdetermined, "underdetermined: need at least 3 point pairs");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  Moments m;
  m.mean_x = x.points().rowwise().sum() * inv_n;
  m.mean_y = y.points().rowwise().sum() * inv_n;
  const Eigen::Matrix3Xd xc = x.points().colwise() - m.mean_x;
  const Eigen::Matrix3Xd yc = y.points().colwise() - m.mean_y;
  m.var_x = xc.squaredNorm() * inv_n;
  m.cov_yx = yc * xc.transpose() * inv_n;
  if (m.var_x < kMinSourceVariance) {
    throw Error(ErrorKind::kDegenerate, "degenerate source pattern");
  }
  return m;
}

struct RotationFit {
  RotationMatrix rotation;
  double trace_ds;  // trace(D S), the scale numerator
};

RotationFit fit_rotation(const Mat3& cov_yx) {
  Eigen::JacobiSVD<Mat3> svd(cov_yx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  const Vec3& d = svd.singularValues();  // descending
  Vec3 s = Vec3::Ones();
  if (u.determinant() * v.determinant() < 0.0) {
    s.z() = -1.0;
  }
  const Mat3 r = u * s.asDiagonal() * v.transpose();
  return {RotationMatrix(r), d.dot(s)};
}

}  // namespace

PointSet::PointSet(Eigen::Matrix3Xd points) : points_(std::move(points)) {
  if (points_.cols() < 1) {
    throw Error(ErrorKind::kInvalidArgument, "point set is empty");
  }
  if (!points_.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "point set has non-finite coordinates");
  }
}

std::string_view to_string(AlignmentMode mode) {
  switch (mode) {
    case AlignmentMode::kNone: return "none";
    case AlignmentMode::kSe3: return "se3";
    case AlignmentMode::kSim3: return "sim3";
    case AlignmentMode::kSim3Golden: return "sim3_golden";
  }
  return "none";
}

std::optional<AlignmentMode> alignment_mode_from_string(std::string_view name) {
  if (name == "none") return AlignmentMode::kNone;
  if (name == "se3") return AlignmentMode::kSe3;
  if (name == "sim3") return AlignmentMode::kSim3;
  if (name == "sim3_golden") return AlignmentMode::kSim3Golden;
  return std::nullopt;
}

double alignment_msse(const PointSet& x, const PointSet& y, const SimilarityTransform& t) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kInvalidArgument, "point sets differ in size");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sum += (y[i] - t.apply(x[i])).squaredNorm();
  }
  return sum / static_cast<double>(x.size());
}

AlignmentResult umeyama_align(const PointSet& x, const PointSet& y, bool with_scale) {
  const Moments m = moments(x, y);
  const RotationFit fit = fit_rotation(m.cov_yx);
  double c = 1.0;
  if (with_scale) {
    c = fit.trace_ds / m.var_x;
    if (!(c > 0.0)) {
      throw Error(ErrorKind::kDegenerate, "non-positive scale");
    }
  }
  const Vec3 t = m.mean_y - c * (fit.rotation * m.mean_x);
  AlignmentResult out{SimilarityTransform(c, fit.rotation, t), 0.0,
                      with_scale ? AlignmentMode::kSim3 : AlignmentMode::kSe3};
  out.residual_msse = alignment_msse(x, y, out.transform);
  return out;
}

AlignmentResult umeyama_align_fixed_scale(const PointSet& x, const PointSet& y, double scale) {
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "scale must be positive");
  }
  const Moments m = moments(x, y);
  const RotationFit fit = fit_rotation(m.cov_yx);
  const Vec3 t = m.mean_y - scale * (fit.rotation * m.mean_x);
  AlignmentResult out{SimilarityTransform(scale, fit.rotation, t), 0.0,
                      AlignmentMode::kSim3Golden};
  out.residual_msse = alignment_msse(x, y, out.transform);
  return out;
}

std::pair<PointSet, PointSet> corresponding_positions(const Trajectory& est,
                                                      const Trajectory& ref,
                                                      const Correspondences& corr) {
  const auto n = static_cast<Eigen::Index>(corr.size());
  Eigen::Matrix3Xd x(3, n);
  Eigen::Matrix3Xd y(3, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const IndexPair& p = corr.pairs[static_cast<std::size_t>(k)];
    if (p.est >= est.size() || p.ref >= ref.size()) {
      throw Error(ErrorKind::kInvalidArgument, "correspondence index out of range");
    }
    x.col(k) = est[p.est].pose.translation();
    y.col(k) = ref[p.ref].pose.translation();
  }
  return {PointSet(std::move(x)), PointSet(std::move(y))};
}

Trajectory apply_alignment(const SimilarityTransform& transform, const Trajectory& trajectory) {
  const UnitQuaternion q = rotmat_to_quat(transform.rotation());
  std::vector<StampedPose> poses;
  poses.reserve(trajectory.size());
  for (const StampedPose& sp : trajectory) {
    poses.push_back({sp.timestamp, Pose(q * sp.pose.orientation(),
                                        transform.apply(sp.pose.translation()))});
  }
  return Trajectory(std::move(poses), trajectory.format(), trajectory.name());
}

AlignmentResult golden_scale_refine(const Trajectory& est, const Trajectory& ref,
                                    const Correspondences& corr,
                                    const AlignmentResult& rigid) {
  if (rigid.mode != AlignmentMode::kSe3) {
    throw Error(ErrorKind::kInvalidArgument, "golden scale refinement needs an se3 result");
  }
  const auto [x, y] = corresponding_positions(est, ref, corr);
  const auto objective = [&](double log_s) {
    return umeyama_align_fixed_scale(x, y, std::exp(log_s)).residual_msse;
  };
  const ScalarMinimum best = golden_section_minimize(
      objective, ScalarInterval{std::log(kMinScale), std::log(kMaxScale)});

  AlignmentResult out = umeyama_align_fixed_scale(x, y, std::exp(best.x));
  if (rigid.residual_msse <= out.residual_msse) {
    out = rigid;
    out.mode = AlignmentMode::kSim3Golden;
  }
  return out;
}

TrajectoryAlignment align_trajectories(const Trajectory& est, const Trajectory& ref,
                                       const Correspondences& corr, AlignmentMode mode) {
  if (corr.empty()) {
    throw Error(ErrorKind::kUnderdetermined, "underdetermined: no correspondences");
  }
  const auto [x, y] = corresponding_positions(est, ref, corr);
  AlignmentResult result;
  switch (mode) {
    case AlignmentMode::kNone:
      result.residual_msse = alignment_msse(x, y, result.transform);
      break;
    case AlignmentMode::kSe3:
      result = umeyama_align(x, y, false);
      break;
    case AlignmentMode::kSim3:
      result = umeyama_align(x, y, true);
      break;
    case AlignmentMode::kSim3Golden:
      result = golden_scale_refine(est, ref, corr, umeyama_align(x, y, false));
      break;
  }
  return {result, apply_alignment(result.transform, est)};
}

}  // namespace trajeval

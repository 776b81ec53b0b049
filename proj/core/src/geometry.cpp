#include "trajeval/geometry.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trajeval/error.hpp"

namespace trajeval {

namespace {

// Quaternions this close to unit norm are left untouched so that values read
// back from 17-digit text reproduce the stored bits.
constexpr double kUnitNormSlack = 1e-14;
constexpr double kSmallAngle = 1e-8;
constexpr double kPrincipalMargin = 1e-6;

Vec3 vee(const Mat3& m) {
  return {m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
}

}  // namespace

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) {
  const double n2 = w * w + x * x + y * y + z * z;
  if (!std::isfinite(n2) || n2 < 1e-300) {
    throw Error(ErrorKind::kInvalidArgument, "invalid quaternion");
  }
  if (std::abs(n2 - 1.0) > kUnitNormSlack) {
    const double n = std::sqrt(n2);
    w /= n;
    x /= n;
    y /= n;
    z /= n;
  }
  bool flip = w < 0.0;
  if (w == 0.0) {
    const double lead = x != 0.0 ? x : (y != 0.0 ? y : z);
    flip = lead < 0.0;
  }
  if (flip) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
  // +0.0 folds negative zeros so equal rotations compare and print equal.
  w_ = w + 0.0;
  x_ = x + 0.0;
  y_ = y + 0.0;
  z_ = z + 0.0;
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& b) const {
  const auto& a = *this;
  return {a.w_ * b.w_ - a.x_ * b.x_ - a.y_ * b.y_ - a.z_ * b.z_,
          a.w_ * b.x_ + a.x_ * b.w_ + a.y_ * b.z_ - a.z_ * b.y_,
          a.w_ * b.y_ - a.x_ * b.z_ + a.y_ * b.w_ + a.z_ * b.x_,
          a.w_ * b.z_ + a.x_ * b.y_ - a.y_ * b.x_ + a.z_ * b.w_};
}

UnitQuaternion UnitQuaternion::conjugate() const {
  return {w_, -x_, -y_, -z_};
}

Vec3 UnitQuaternion::rotate(const Vec3& v) const {
  const Vec3 u(x_, y_, z_);
  const Vec3 uv = 2.0 * u.cross(v);
  return v + w_ * uv + u.cross(uv);
}

RotationMatrix::RotationMatrix(const Mat3& m) : m_(m) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "rotation matrix has non-finite entries");
  }
  const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > kRotationTolerance) {
    throw Error(ErrorKind::kInvalidArgument, "matrix is not orthonormal");
  }
  if (std::abs(m.determinant() - 1.0) > kRotationTolerance) {
    throw Error(ErrorKind::kInvalidArgument, "matrix is not a proper rotation");
  }
}

RotationMatrix RotationMatrix::nearest(const Mat3& m) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "rotation matrix has non-finite entries");
  }
  if (m.determinant() <= 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "reflection in pose");
  }
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  return {r, Unchecked{}};
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& rhs) const {
  return {m_ * rhs.m_, Unchecked{}};
}

RotationMatrix RotationMatrix::transpose() const {
  return {m_.transpose(), Unchecked{}};
}

double RotationMatrix::angle() const {
  const double c = 0.5 * (m_.trace() - 1.0);
  const double s = 0.5 * vee(m_).norm();
  return std::atan2(s, c);
}

RotationMatrix quat_to_rotmat(const UnitQuaternion& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat3 m;
  // clang-format off
  m << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z),       2.0 * (x * z + w * y),
       2.0 * (x * y + w * z),       1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
       2.0 * (x * z - w * y),       2.0 * (y * z + w * x),       1.0 - 2.0 * (x * x + y * y);
  // clang-format on
  return RotationMatrix(m);
}

UnitQuaternion rotmat_to_quat(const RotationMatrix& rot) {
  // Shepperd's method: branch on the largest of trace and diagonal.
  const Mat3& r = rot.matrix();
  const double tr = r.trace();
  if (tr > 0.0) {
    const double s = 2.0 * std::sqrt(tr + 1.0);
    return {0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s,
            (r(1, 0) - r(0, 1)) / s};
  }
  if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    return {(r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s,
            (r(0, 2) + r(2, 0)) / s};
  }
  if (r(1, 1) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    return {(r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s,
            (r(1, 2) + r(2, 1)) / s};
  }
  const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
  return {(r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s,
          0.25 * s};
}

double angle_between(const RotationMatrix& a, const RotationMatrix& b) {
  return (a.transpose() * b).angle();
}

Pose::Pose(const UnitQuaternion& q, const Vec3& t)
    : q_(q), r_(quat_to_rotmat(q)), t_(t) {
  if (!t.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "pose translation is not finite");
  }
}

Pose::Pose(const RotationMatrix& r, const Vec3& t) : q_(rotmat_to_quat(r)), r_(r), t_(t) {
  if (!t.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "pose translation is not finite");
  }
}

Pose Pose::operator*(const Pose& rhs) const {
  return {q_ * rhs.q_, r_ * rhs.t_ + t_};
}

Pose Pose::inverse() const {
  const UnitQuaternion qi = q_.conjugate();
  return {qi, -(r_.transpose() * t_)};
}

SimilarityTransform::SimilarityTransform(double scale, const RotationMatrix& r,
                                         const Vec3& t)
    : c_(scale), r_(r), t_(t) {
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "similarity scale must be positive");
  }
  if (!t.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "similarity translation is not finite");
  }
}

SimilarityTransform SimilarityTransform::operator*(const SimilarityTransform& rhs) const {
  return {c_ * rhs.c_, r_ * rhs.r_, c_ * (r_ * rhs.t_) + t_};
}

SimilarityTransform SimilarityTransform::inverse() const {
  const RotationMatrix rt = r_.transpose();
  return {1.0 / c_, rt, -(rt * t_) / c_};
}

Twist::Twist(const Vec6& v) : v_(v) {
  if (!v.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "twist has non-finite components");
  }
}

Twist::Twist(const Vec3& rotation, const Vec3& translation) {
  Vec6 v;
  v << rotation, translation;
  *this = Twist(v);
}

Mat3 hat(const Vec3& v) {
  Mat3 m;
  // clang-format off
  m <<   0.0, -v.z(),  v.y(),
       v.z(),    0.0, -v.x(),
      -v.y(),  v.x(),    0.0;
  // clang-format on
  return m;
}

RotationMatrix so3_exp(const Vec3& omega) {
  const double theta = omega.norm();
  const Mat3 w = hat(omega);
  if (theta < kSmallAngle) {
    return RotationMatrix(Mat3::Identity() + w + 0.5 * w * w);
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return RotationMatrix(Mat3::Identity() + a * w + b * w * w);
}

Vec3 so3_log(const RotationMatrix& r) {
  const Vec3 v = vee(r.matrix());
  const double theta = r.angle();
  if (theta < kSmallAngle) {
    return 0.5 * v;
  }
  if (std::numbers::pi - theta < kPrincipalMargin) {
    throw Error(ErrorKind::kNumerical, "non-principal rotation");
  }
  return theta / (2.0 * std::sin(theta)) * v;
}

Pose se3_exp(const Twist& xi) {
  const Vec3 omega = xi.rotation();
  const double theta = omega.norm();
  const Mat3 w = hat(omega);
  Mat3 v;
  if (theta < kSmallAngle) {
    v = Mat3::Identity() + 0.5 * w + w * w / 6.0;
  } else {
    const double t2 = theta * theta;
    v = Mat3::Identity() + (1.0 - std::cos(theta)) / t2 * w +
        (theta - std::sin(theta)) / (t2 * theta) * w * w;
  }
  return {so3_exp(omega), v * xi.translation()};
}

Twist se3_log(const Pose& p) {
  const Vec3 omega = so3_log(p.rotation());
  const double theta = omega.norm();
  const Mat3 w = hat(omega);
  Mat3 v_inv;
  if (theta < kSmallAngle) {
    v_inv = Mat3::Identity() - 0.5 * w + w * w / 12.0;
  } else {
    const double k = (1.0 - theta * std::sin(theta) / (2.0 * (1.0 - std::cos(theta)))) /
                     (theta * theta);
    v_inv = Mat3::Identity() - 0.5 * w + k * w * w;
  }
  return {omega, v_inv * p.translation()};
}

}  // namespace trajeval

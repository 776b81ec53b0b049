#pragma once

// Rigid-body and similarity transforms in 3D, plus the SE(3) exponential
// and logarithm used by the pose optimizer.
//
// All types are immutable values. Quaternions are stored as (w, x, y, z)
// with the sign canonicalized so that w >= 0.

#include <Eigen/Dense>

namespace trajeval {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;

/// Tolerance used when validating orthonormality and unit norms.
inline constexpr double kRotationTolerance = 1e-9;

class UnitQuaternion {
 public:
  UnitQuaternion() = default;

  /// Normalizes the input and canonicalizes the sign (w >= 0; when w == 0
  /// the first non-zero vector component is made positive). Inputs already
  /// unit-norm to ~1e-14 are kept bit-for-bit. Throws Error(kInvalidArgument)
  /// on a zero or non-finite quaternion.
  UnitQuaternion(double w, double x, double y, double z);

  static UnitQuaternion identity() { return {}; }

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

  /// Hamilton product, renormalized.
  UnitQuaternion operator*(const UnitQuaternion& rhs) const;
  UnitQuaternion conjugate() const;

  Vec3 rotate(const Vec3& v) const;

  friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

 private:
  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

class RotationMatrix {
 public:
  RotationMatrix() : m_(Mat3::Identity()) {}

  /// Validates RᵀR = I and det(R) = +1 within kRotationTolerance.
  explicit RotationMatrix(const Mat3& m);

  /// Nearest proper rotation in the Frobenius sense (SVD projection).
  /// Throws Error(kInvalidArgument) when det(m) <= 0.
  static RotationMatrix nearest(const Mat3& m);

  static RotationMatrix identity() { return {}; }

  const Mat3& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }

  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  RotationMatrix operator*(const RotationMatrix& rhs) const;
  RotationMatrix transpose() const;

  /// Rotation angle in [0, pi].
  double angle() const;

 private:
  struct Unchecked {};
  RotationMatrix(const Mat3& m, Unchecked) : m_(m) {}

  Mat3 m_;
};

RotationMatrix quat_to_rotmat(const UnitQuaternion& q);
UnitQuaternion rotmat_to_quat(const RotationMatrix& r);

/// Angle of the relative rotation aᵀb, in [0, pi].
double angle_between(const RotationMatrix& a, const RotationMatrix& b);

/// Rigid transform p -> R p + t. The orientation quaternion is the stored
/// representation; the rotation matrix is derived from it once.
class Pose {
 public:
  Pose() = default;
  Pose(const UnitQuaternion& q, const Vec3& t);
  Pose(const RotationMatrix& r, const Vec3& t);

  static Pose identity() { return {}; }
  static Pose from_translation(const Vec3& t) { return {UnitQuaternion{}, t}; }

  const UnitQuaternion& orientation() const { return q_; }
  const RotationMatrix& rotation() const { return r_; }
  const Vec3& translation() const { return t_; }

  Vec3 apply(const Vec3& p) const { return r_ * p + t_; }

  /// (a * b).apply(p) == a.apply(b.apply(p)).
  Pose operator*(const Pose& rhs) const;
  Pose inverse() const;

 private:
  UnitQuaternion q_;
  RotationMatrix r_;
  Vec3 t_ = Vec3::Zero();
};

/// p -> c R p + t with c > 0.
class SimilarityTransform {
 public:
  SimilarityTransform() = default;
  /// Throws Error(kInvalidArgument) unless scale is finite and positive.
  SimilarityTransform(double scale, const RotationMatrix& r, const Vec3& t);

  static SimilarityTransform identity() { return {}; }
  /// Rigid mode: scale is exactly 1.
  static SimilarityTransform rigid(const RotationMatrix& r, const Vec3& t) {
    return {1.0, r, t};
  }
  static SimilarityTransform rigid(const Pose& p) {
    return {1.0, p.rotation(), p.translation()};
  }

  double scale() const { return c_; }
  const RotationMatrix& rotation() const { return r_; }
  const Vec3& translation() const { return t_; }

  Vec3 apply(const Vec3& p) const { return c_ * (r_ * p) + t_; }

  SimilarityTransform operator*(const SimilarityTransform& rhs) const;
  SimilarityTransform inverse() const;

 private:
  double c_ = 1.0;
  RotationMatrix r_;
  Vec3 t_ = Vec3::Zero();
};

inline Vec3 sim3_apply(const SimilarityTransform& s, const Vec3& p) {
  return s.apply(p);
}

/// Tangent vector of SE(3): rotational part first, then translational.
class Twist {
 public:
  Twist() : v_(Vec6::Zero()) {}
  /// Throws Error(kInvalidArgument) on non-finite components.
  explicit Twist(const Vec6& v);
  Twist(const Vec3& rotation, const Vec3& translation);

  Vec3 rotation() const { return v_.head<3>(); }
  Vec3 translation() const { return v_.tail<3>(); }
  const Vec6& vector() const { return v_; }
  double norm() const { return v_.norm(); }

 private:
  Vec6 v_;
};

/// Skew-symmetric matrix with hat(a) * b == a.cross(b).
Mat3 hat(const Vec3& v);

RotationMatrix so3_exp(const Vec3& omega);
/// Principal logarithm; throws Error(kNumerical, "non-principal rotation")
/// when the angle is within 1e-6 of pi.
Vec3 so3_log(const RotationMatrix& r);

Pose se3_exp(const Twist& xi);
/// Same principal-branch restriction as so3_log.
Twist se3_log(const Pose& p);

}  // namespace trajeval

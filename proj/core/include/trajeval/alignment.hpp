#pragma once

// Least-squares similarity alignment of corresponding point sets, minimizing
//
//   e2(R, t, c) = (1/n) * sum_i |y_i - (c R x_i + t)|^2
//
// in closed form (SVD of the cross-covariance with the determinant
// correction that keeps R a proper rotation), and trajectory-level
// alignment built on top of it.

#include <optional>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "trajeval/association.hpp"
#include "trajeval/geometry.hpp"
#include "trajeval/parsers.hpp"

namespace trajeval {

/// n >= 1 finite points in R^3, one per column.
class PointSet {
 public:
  /// Throws Error(kInvalidArgument) if empty or non-finite.
  explicit PointSet(Eigen::Matrix3Xd points);

  Eigen::Index size() const { return points_.cols(); }
  const Eigen::Matrix3Xd& points() const { return points_; }
  Vec3 operator[](Eigen::Index i) const { return points_.col(i); }

 private:
  Eigen::Matrix3Xd points_;
};

enum class AlignmentMode { kNone, kSe3, kSim3, kSim3Golden };

std::string_view to_string(AlignmentMode mode);
std::optional<AlignmentMode> alignment_mode_from_string(std::string_view name);

struct AlignmentResult {
  SimilarityTransform transform;
  double residual_msse = 0.0;  // e2 at `transform`, m^2
  AlignmentMode mode = AlignmentMode::kNone;
};

/// Mean squared error of y against T(x), summed in index order.
double alignment_msse(const PointSet& x, const PointSet& y, const SimilarityTransform& t);

/// Closed-form minimizer of e2 mapping x onto y. with_scale = false fixes
/// c = 1 (rigid).
///
/// Errors: n < 3 or size mismatch -> kUnderdetermined; source variance
/// below 1e-12 -> kDegenerate "degenerate source pattern"; computed scale
/// <= 0 -> kDegenerate "non-positive scale".
AlignmentResult umeyama_align(const PointSet& x, const PointSet& y, bool with_scale);

/// Best rotation and translation for a prescribed scale c > 0. The rotation
/// does not depend on c, so this is the rigid solution re-centred for c.
AlignmentResult umeyama_align_fixed_scale(const PointSet& x, const PointSet& y, double scale);

/// Translations of corresponding poses: first = estimate, second = reference.
std::pair<PointSet, PointSet> corresponding_positions(const Trajectory& est,
                                                      const Trajectory& ref,
                                                      const Correspondences& corr);

/// Maps every pose of `trajectory`: translation by sim3_apply, rotation
/// left-multiplied by the transform's rotation.
Trajectory apply_alignment(const SimilarityTransform& transform, const Trajectory& trajectory);

/// Golden-section search for the scale on log(s), s in [1e-3, 1e3], with
/// R, t re-fitted for every sampled s. Never worse than s = 1. `rigid` must
/// be an se3-mode result on the same correspondences.
AlignmentResult golden_scale_refine(const Trajectory& est, const Trajectory& ref,
                                    const Correspondences& corr,
                                    const AlignmentResult& rigid);

struct TrajectoryAlignment {
  AlignmentResult result;
  Trajectory aligned;
};

/// Fits the alignment of `est` onto `ref` from the translation components of
/// corresponding poses and returns the transformed estimate. Fitted modes
/// need at least three pairs (kUnderdetermined otherwise).
TrajectoryAlignment align_trajectories(const Trajectory& est, const Trajectory& ref,
                                       const Correspondences& corr, AlignmentMode mode);

}  // namespace trajeval

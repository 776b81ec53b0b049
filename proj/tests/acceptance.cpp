// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "commands.hpp"
#include "oracles.hpp"
#include "report.hpp"
#include "trajeval/alignment.hpp"
#include "trajeval/association.hpp"
#include "trajeval/error.hpp"
#include "trajeval/metrics.hpp"
#include "trajeval/parsers.hpp"
#include "trajeval/pose_optimizer.hpp"
#include "trajeval/random.hpp"
#include "trajeval/scalar_opt.hpp"
#include "trajeval/synthgen.hpp"

using namespace trajeval;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Rotation angle of a relative rotation, through Eigen rather than the library.
double rotation_gap(const Mat3& a, const Mat3& b) {
  return Eigen::AngleAxisd(a.transpose() * b).angle();
}

Eigen::Matrix3Xd random_points(Rng& rng, Eigen::Index n, double spread) {
  Eigen::Matrix3Xd p(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) p(k, i) = rng.uniform(-spread, spread);
  }
  return p;
}

Vec3 random_vec(Rng& rng, double spread) {
  return {rng.uniform(-spread, spread), rng.uniform(-spread, spread),
          rng.uniform(-spread, spread)};
}

Correspondences index_pairs(std::size_t n) {
  Correspondences c;
  for (std::size_t i = 0; i < n; ++i) c.pairs.push_back({i, i});
  return c;
}

Trajectory from_positions(const Eigen::Matrix3Xd& p) {
  std::vector<StampedPose> poses;
  for (Eigen::Index i = 0; i < p.cols(); ++i) {
    poses.push_back({0.1 * static_cast<double>(i), Pose::from_translation(p.col(i))});
  }
  return Trajectory(std::move(poses));
}

double ate_rmse(const Trajectory& est, const Trajectory& ref, const Correspondences& corr,
                AlignmentMode mode) {
  const TrajectoryAlignment a = align_trajectories(est, ref, corr, mode);
  return ate_translation(a.aligned, ref, corr).second.rmse;
}

Outcome umeyama_recovery() {
  Rng rng(1001);
  double worst = 0.0;
  const Timer timer;
  for (int trial = 0; trial < 1000; ++trial) {
    const double c = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    const Mat3 r = oracle::random_rotation(rng);
    const Vec3 t = random_vec(rng, 10.0);
    const Eigen::Matrix3Xd x =
        random_points(rng, 10 + static_cast<Eigen::Index>(rng.index(491)), 5.0);
    const Eigen::Matrix3Xd y = ((c * r) * x).colwise() + t;
    const AlignmentResult a = umeyama_align(PointSet(x), PointSet(y), true);
    worst = std::max({worst, std::abs(a.transform.scale() - c),
                      rotation_gap(a.transform.rotation().matrix(), r),
                      (a.transform.translation() - t).cwiseAbs().maxCoeff()});
  }
  const double total = timer.seconds();
  return {worst <= 1e-9 && total < 5.0,
          fmt::format("1000 trials, worst error {:.2e}, {:.3f} s", worst, total)};
}

Outcome reflection_safety() {
  Rng rng(2002);
  const Mat3 mirror = Vec3(1.0, 1.0, -1.0).asDiagonal();
  bool pass = true;
  int trials = 0;
  double worst_det = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  while (trials < 40) {
    Eigen::Matrix3Xd x = random_points(rng, 6 + static_cast<Eigen::Index>(rng.index(10)), 5.0);
    x.row(2) *= 0.02;
    Eigen::Matrix3Xd y = ((oracle::random_rotation(rng) * mirror) * x).colwise() +
                         random_vec(rng, 3.0);
    for (Eigen::Index i = 0; i < y.cols(); ++i) y.col(i) += 0.01 * random_vec(rng, 1.0);
    if (oracle::svd_determinant_sign(x, y) >= 0.0) continue;
    ++trials;
    for (bool with_scale : {false, true}) {
      const AlignmentResult a = umeyama_align(PointSet(x), PointSet(y), with_scale);
      const double det = a.transform.rotation().matrix().determinant();
      worst_det = std::max(worst_det, std::abs(det - 1.0));
      const double brute = oracle::brute_force_min_residual(
          x, y, with_scale, 7000 + static_cast<std::uint64_t>(trials), 12);
      worst_excess = std::max(worst_excess, a.residual_msse - brute);
      for (double other : oracle::sign_pattern_residuals(x, y, with_scale)) {
        pass = pass && a.residual_msse <= other + 1e-12;
      }
    }
  }
  pass = pass && worst_det <= 1e-12 && worst_excess <= 1e-12;
  return {pass, fmt::format("{} reflected sets, max |det R - 1| {:.1e}, residual minus brute force "
                            "{:.1e}",
                            trials, worst_det, worst_excess)};
}

Outcome ate_identities() {
  Rng rng(3003);
  const Eigen::Matrix3Xd p = random_points(rng, 10000, 20.0);
  const Trajectory ref = from_positions(p);
  const Correspondences corr = index_pairs(10000);

  const double self = ate_rmse(ref, ref, corr, AlignmentMode::kNone);
  const double offset =
      ate_rmse(from_positions(p.colwise() + Vec3(3, 4, 0)), ref, corr, AlignmentMode::kNone);
  Eigen::Matrix3Xd noisy = p;
  for (Eigen::Index i = 0; i < noisy.cols(); ++i) {
    for (int k = 0; k < 3; ++k) noisy(k, i) += rng.normal(0.0, 0.1);
  }
  const double gauss = ate_rmse(from_positions(noisy), ref, corr, AlignmentMode::kNone);
  const double expected = 0.1 * std::sqrt(3.0);
  return {self == 0.0 && std::abs(offset - 5.0) <= 1e-12 && std::abs(gauss - expected) <= 0.005,
          fmt::format("self {}, offset {:.15f}, gaussian {:.5f} vs {:.5f}", self, offset, gauss,
                      expected)};
}

Outcome alignment_monotonicity() {
  int ordered = 0;
  int failures = 0;
  std::string first_problem;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    try {
      Rng rng(seed);
      SynthSpec spec;
      spec.shape = static_cast<SynthShape>(seed % 3);
      spec.n = 50 + rng.index(200);
      spec.seed = seed;
      spec.noise_sigma_t = rng.uniform(0.01, 0.5);
      spec.noise_sigma_r = rng.uniform(0.0, 0.1);
      spec.applied_transform = SimilarityTransform(
          std::exp(rng.uniform(-1.0, 1.0)), RotationMatrix(oracle::random_rotation(rng)),
          random_vec(rng, 10.0));
      const SynthPair pair = generate(spec);
      const Correspondences corr = associate(pair.ground_truth, pair.estimate);
      const double none = ate_rmse(pair.estimate, pair.ground_truth, corr, AlignmentMode::kNone);
      const double se3 = ate_rmse(pair.estimate, pair.ground_truth, corr, AlignmentMode::kSe3);
      const double sim3 = ate_rmse(pair.estimate, pair.ground_truth, corr, AlignmentMode::kSim3);
      if (sim3 <= se3 && se3 <= none) {
        ++ordered;
      } else if (first_problem.empty()) {
        first_problem = fmt::format(", seed {}: {} {} {}", seed, sim3, se3, none);
      }
    } catch (const std::exception& e) {
      ++failures;
      if (first_problem.empty()) first_problem = fmt::format(", seed {}: {}", seed, e.what());
    }
  }
  return {ordered == 100 && failures == 0,
          fmt::format("{}/100 ordered, {} exceptions{}", ordered, failures, first_problem)};
}

Outcome golden_section() {
  const ScalarMinimum quad = golden_section_minimize(
      [](double x) { return (x - 2.0) * (x - 2.0); }, {-5.0, 7.0, 1e-10, 200});
  const ScalarMinimum kink =
      golden_section_minimize([](double x) { return std::abs(x - 1.0); }, {-3.0, 4.0, 1e-10, 200});
  const double quad_err = std::abs(quad.x - 2.0);
  const double kink_err = std::abs(kink.x - 1.0);

  // Width after k iterations against the previous width.
  const double shrink = (std::sqrt(5.0) - 1.0) / 2.0;
  double worst_ratio = 0.0;
  double prev = 3.0;
  for (int k = 1; k <= 60; ++k) {
    const ScalarMinimum m =
        golden_section_minimize([](double x) { return x * x; }, {-1.0, 2.0, 1e-300, k});
    const double width = m.bracket_upper - m.bracket_lower;
    worst_ratio = std::max(worst_ratio, std::abs(width / prev - shrink));
    prev = width;
  }

  Rng rng(5005);
  const Eigen::Matrix3Xd p = random_points(rng, 40, 5.0);
  const Trajectory ref = from_positions(p);
  const Mat3 r = oracle::random_rotation(rng);
  const Trajectory est = from_positions(((3.0 * r) * p).colwise() + random_vec(rng, 4.0));
  const Correspondences corr = index_pairs(40);
  const AlignmentResult rigid = align_trajectories(est, ref, corr, AlignmentMode::kSe3).result;
  const double s = golden_scale_refine(est, ref, corr, rigid).transform.scale();
  const double s_err = std::abs(s - 1.0 / 3.0);

  return {quad_err <= 1e-8 && kink_err <= 1e-8 && worst_ratio <= 1e-12 && s_err <= 1e-6,
          fmt::format("quadratic {:.1e}, |x-1| {:.1e}, shrink ratio error {:.1e}, scale 1/3 "
                      "error {:.1e}",
                      quad_err, kink_err, worst_ratio, s_err)};
}

struct PoseGap {
  double angle;
  double translation;
};

PoseGap pose_gap(const Pose& a, const Pose& b) {
  return {rotation_gap(a.rotation().matrix(), b.rotation().matrix()),
          (a.translation() - b.translation()).norm()};
}

Pose perturb(const Pose& p, Rng& rng, double norm) {
  Vec6 xi;
  for (int k = 0; k < 6; ++k) xi[k] = rng.normal();
  xi *= norm / xi.norm();
  return se3_exp(Twist(xi)) * p;
}

Outcome bundle_adjustment() {
  Rng rng(6006);
  double recover = 0.0;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    spec.stereo = seed % 2 == 0;
    const Scene scene = generate_scene(spec);
    Timer timer;
    const PoseEstimate est = trajeval::motion_only_ba(
        scene.observations, scene.camera, perturb(scene.world_to_camera, rng, 0.2),
        RobustCost{spec.stereo ? kHuberDeltaStereo : kHuberDeltaMono});
    slowest = std::max(slowest, timer.seconds());
    const PoseGap g = pose_gap(est.pose, scene.world_to_camera);
    recover = std::max({recover, g.angle, g.translation});
  }

  const CameraIntrinsics cam{500.0, 480.0, 320.0, 240.0, 0.12};
  double jac = 0.0;
  const double h = 1e-6;
  for (int trial = 0; trial < 200; ++trial) {
    const bool stereo = trial % 2 == 1;
    const Pose pose(RotationMatrix(oracle::random_rotation(rng)),
                    Vec3(rng.normal(), rng.normal(), rng.normal()));
    const Vec3 p_cam(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(1, 8));
    const Vec3 kp(rng.uniform(0, 640), rng.uniform(0, 480), rng.uniform(0, 640));
    const Vec3 world = pose.inverse().apply(p_cam);
    const Observation obs =
        stereo ? Observation::stereo(world, kp, 1.0) : Observation::mono(world, kp.head<2>(), 1.0);
    const ResidualJacobian rj = residual_and_jacobian(obs, cam, pose);
    Eigen::Matrix<double, 3, 6> fd;
    for (int j = 0; j < 6; ++j) {
      Vec6 e = Vec6::Zero();
      e[j] = h;
      fd.col(j) = (residual_and_jacobian(obs, cam, se3_exp(Twist(e)) * pose).residual -
                   residual_and_jacobian(obs, cam, se3_exp(Twist(-e)) * pose).residual) /
                  (2 * h);
    }
    jac = std::max(jac, (fd - rj.jacobian).norm() / rj.jacobian.norm());
  }

  double outlier = 0.0;
  double flagged_share = 1.0;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    spec.outlier_fraction = 0.2;
    const Scene scene = generate_scene(spec);
    Timer timer;
    const PoseEstimate est = trajeval::motion_only_ba(
        scene.observations, scene.camera, perturb(scene.world_to_camera, rng, 0.05),
        RobustCost{kHuberDeltaMono});
    slowest = std::max(slowest, timer.seconds());
    const PoseGap g = pose_gap(est.pose, scene.world_to_camera);
    outlier = std::max({outlier, g.angle, g.translation});
    std::size_t corrupted = 0;
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < scene.corrupted.size(); ++i) {
      if (!scene.corrupted[i]) continue;
      ++corrupted;
      if (!est.inlier_mask[i]) ++flagged;
    }
    flagged_share =
        std::min(flagged_share, static_cast<double>(flagged) / static_cast<double>(corrupted));
  }

  return {recover <= 1e-6 && jac <= 1e-5 && outlier <= 1e-3 && flagged_share >= 0.9 &&
              slowest < 1.0,
          fmt::format("recovery {:.1e}, jacobian {:.1e}, outlier scenes {:.1e} with {:.0f}% "
                      "flagged, slowest {:.3f} s",
                      recover, jac, outlier, 100.0 * flagged_share, slowest)};
}

Outcome projection_models() {
  const CameraIntrinsics k{100.0, 100.0, 320.0, 240.0, 0.5};
  bool pass = project_mono(Vec3(1, 0, 1), k) == Vec2(420.0, 240.0) &&
              project_mono(Vec3(0, 0, 1), k) == Vec2(320.0, 240.0) &&
              project_stereo(Vec3(0, 0, 1), k) == Vec3(320.0, 240.0, 270.0) &&
              project_stereo(Vec3(1, 0, 1), k) == Vec3(420.0, 240.0, 370.0);
  const CameraIntrinsics cam{718.856, 718.856, 607.1928, 185.2157, 0.5371657};
  Rng rng(7007);
  double worst = 0.0;
  // Points that land inside a 1241 x 376 image, lifted to depths in [1, 80] m.
  for (int i = 0; i < 10000; ++i) {
    const double z = rng.uniform(1.0, 80.0);
    const Vec3 p((rng.uniform(0.0, 1241.0) - cam.cx) * z / cam.fx,
                 (rng.uniform(0.0, 376.0) - cam.cy) * z / cam.fy, z);
    const Vec3 s = project_stereo(p, cam);
    worst = std::max(worst, std::abs((s.x() - s.z()) - cam.fx * cam.baseline / p.z()));
  }
  pass = pass && worst <= 1e-12;
  return {pass, fmt::format("substitution examples exact, worst disparity error {:.1e}", worst)};
}

Outcome parser_round_trips() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthSpec spec;
    spec.shape = SynthShape::kRandomWalk;
    spec.n = 500;
    spec.dt = 0.0333;
    spec.seed = seed;
    spec.noise_sigma_t = 0.1;
    spec.noise_sigma_r = 0.1;
    const Trajectory t = generate(spec).estimate;
    const Trajectory back = parse_tum(write_tum(t));
    if (back.size() != t.size()) return {false, "TUM round-trip changed the pose count"};
    for (std::size_t i = 0; i < t.size(); ++i) {
      const UnitQuaternion& qa = t[i].pose.orientation();
      const UnitQuaternion& qb = back[i].pose.orientation();
      worst = std::max({worst, std::abs(back[i].timestamp - t[i].timestamp),
                        (back[i].pose.translation() - t[i].pose.translation())
                            .cwiseAbs()
                            .maxCoeff(),
                        std::abs(qa.w() - qb.w()), std::abs(qa.x() - qb.x()),
                        std::abs(qa.y() - qb.y()), std::abs(qa.z() - qb.z())});
    }
  }

  bool euroc = true;
  Rng rng(8008);
  for (int i = 0; i < 1000; ++i) {
    const auto secs = static_cast<std::int64_t>(rng.index(2000000000));
    const auto ns = static_cast<std::int64_t>(rng.next() >> 11);
    const Trajectory a = parse_euroc("#h\n" + std::to_string(secs) + "000000000,0,0,0,1,0,0,0");
    const Trajectory b = parse_euroc("#h\n" + std::to_string(ns) + ",0,0,0,1,0,0,0");
    euroc = euroc && a[0].timestamp == static_cast<double>(secs) &&
            b[0].timestamp == static_cast<double>(ns) / 1e9;
  }

  bool kitti = false;
  const Trajectory id = parse_kitti("1 0 0 0 0 1 0 0 0 0 1 0\n");
  kitti = id.size() == 1 && id[0].timestamp == 0.0 &&
          id[0].pose.rotation().matrix() == Mat3::Identity() && id[0].pose.translation().isZero();
  try {
    parse_kitti("1 0 0 0 0 1 0 0 0 0 1 0\n1 0 0 0 0 1 0 0 0 0 1\n");
    kitti = false;
  } catch (const ParseError& e) {
    kitti = kitti && e.line() == 2;
  }
  try {
    parse_kitti("1 0 0 0 0 1 0 0 0 0 1 0 5\n");
    kitti = false;
  } catch (const ParseError& e) {
    kitti = kitti && e.line() == 1;
  }

  return {worst <= 1e-12 && euroc && kitti,
          fmt::format("TUM worst field error {:.1e}, EuRoC exact {}, KITTI cases {}", worst,
                      euroc ? "yes" : "no", kitti ? "ok" : "wrong")};
}

Outcome association_oracle() {
  Rng rng(9009);
  int agree = 0;
  int trials = 0;
  while (trials < 500) {
    const std::size_t n = 1 + rng.index(8);
    const std::size_t m = 1 + rng.index(8);
    std::vector<double> rs;
    std::vector<double> es;
    // Estimate jitter exceeds the spacing, so windows overlap and compete.
    for (std::size_t i = 0; i < n; ++i) {
      rs.push_back(0.01 + 0.025 * static_cast<double>(i) + rng.uniform(0.0, 0.01));
    }
    for (std::size_t j = 0; j < m; ++j) {
      es.push_back(0.01 + 0.025 * static_cast<double>(j) + rng.uniform(-0.01, 0.02));
    }
    std::sort(es.begin(), es.end());
    const double d = rng.uniform(0.005, 0.04);
    const int expected = oracle::max_matching_brute_force(rs, es, d);
    if (expected == 0) continue;
    ++trials;
    std::vector<StampedPose> ref;
    std::vector<StampedPose> est;
    for (double t : rs) ref.push_back({t, Pose()});
    for (double t : es) est.push_back({t, Pose()});
    try {
      const Correspondences c =
          associate(Trajectory(std::move(ref)), Trajectory(std::move(est)), {d, 0.0, false});
      if (static_cast<int>(c.size()) == expected) ++agree;
    } catch (const Error&) {
    }
  }
  return {agree == 500, fmt::format("{}/500 instances match the exhaustive maximum", agree)};
}

struct CliRun {
  int code;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, err.str()};
}

Outcome end_to_end_cli() {
  std::random_device rd;
  const fs::path root =
      fs::temp_directory_path() / fmt::format("trajeval_acceptance_{}_{}", rd(), rd());
  std::vector<std::string> reports;
  std::string failure;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    const std::string gt = (dir / "gt.txt").string();
    const std::string est = (dir / "est.txt").string();
    const std::string rep = (dir / "report.json").string();
    const CliRun s = cli({"synth", "--shape", "random_walk", "--n", "300", "--seed", "42",
                          "--scale", "2.5", "--rotvec", "0.1", "0.7", "-0.4", "--translation",
                          "1", "-2", "3", "--out-gt", gt, "--out-est", est});
    const CliRun a = cli({"ape", gt, est, "--align", "sim3", "--out-report", rep});
    if (s.code != 0 || a.code != 0) {
      failure = s.err + a.err;
      break;
    }
    reports.push_back(read_text_file(rep));
  }
  fs::remove_all(root);
  if (reports.size() != 2) return {false, "command failed: " + failure};

  // The report maps the estimate onto the reference, so it carries 1 / 2.5.
  const cli::Report r = cli::report_from_json(nlohmann::json::parse(reports[0]));
  const double err = std::abs(r.alignment.scale - 1.0 / 2.5);
  const bool identical = reports[0] == reports[1];
  return {err <= 1e-9 && identical,
          fmt::format("scale error {:.1e}, reports {}", err,
                      identical ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Umeyama generator recovery", umeyama_recovery},
      {"reflection safety", reflection_safety},
      {"ATE identities", ate_identities},
      {"alignment monotonicity", alignment_monotonicity},
      {"golden-section search", golden_section},
      {"motion-only bundle adjustment", bundle_adjustment},
      {"projection models", projection_models},
      {"parser round-trips", parser_round_trips},
      {"association against exhaustive matching", association_oracle},
      {"end-to-end CLI", end_to_end_cli},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("unexpected exception: {}", e.what())};
    }
    if (!o.pass) ++failed;
    fmt::print("{:>2} {} {}: {}\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
             criteria.size());
  return failed == 0 ? 0 : 1;
}

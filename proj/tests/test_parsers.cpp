#include <charconv>
#include <cmath>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "trajeval/error.hpp"
#include "trajeval/parsers.hpp"
#include "trajeval/random.hpp"
#include "trajeval/synthgen.hpp"

using namespace trajeval;

namespace {

std::size_t error_line(auto&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::string error_text(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

Trajectory random_trajectory(std::uint64_t seed, std::size_t n) {
  SynthSpec spec;
  spec.shape = SynthShape::kRandomWalk;
  spec.n = n;
  spec.dt = 0.0333;
  spec.seed = seed;
  spec.noise_sigma_t = 0.05;
  spec.noise_sigma_r = 0.05;
  return generate(spec).estimate;
}

}  // namespace

TEST_CASE("parse_tum basic rows") {
  const Trajectory one = parse_tum("0.0 0 0 0 0 0 0 1");
  REQUIRE(one.size() == 1);
  CHECK(one[0].timestamp == 0.0);
  CHECK(one[0].pose.rotation().matrix() == Mat3::Identity());
  CHECK(one[0].pose.translation() == Vec3::Zero());

  const Trajectory two = parse_tum("1.0 2 0 0 0 0 0 1\n2.0 4 0 0 0 0 0 1");
  REQUIRE(two.size() == 2);
  CHECK(two[0].pose.translation() == Vec3(2, 0, 0));
  CHECK(two[1].pose.translation() == Vec3(4, 0, 0));
  CHECK(two.format() == TrajectoryFormat::kTum);
}

TEST_CASE("parse_tum comments, blank lines and CRLF") {
  const Trajectory t =
      parse_tum("# header\r\n\r\n1 0 0 0 0 0 0 1\r\n  # indented comment\n2 1 1 1 0 0 0 1\r\n");
  CHECK(t.size() == 2);
}

TEST_CASE("parse_tum quaternion order is qx qy qz qw") {
  // 90 degrees about z: qz = qw = sqrt(1/2).
  const double h = std::sqrt(0.5);
  const Trajectory t = parse_tum("0 0 0 0 0 0 " + std::to_string(h) + " " + std::to_string(h));
  CHECK(t[0].pose.rotation().matrix().isApprox(
      oracle::axis_angle_matrix(Vec3::UnitZ(), M_PI / 2), 1e-6));
}

TEST_CASE("parse_tum errors carry the line number") {
  CHECK(error_line([] { parse_tum("0 0 0 0 0 0 1"); }) == 1);
  CHECK(error_line([] { parse_tum("0 0 0 0 0 0 0 1\n1 0 0 0 x 0 0 1"); }) == 2);
  CHECK(error_line([] { parse_tum("# c\n1 0 0 0 0 0 0 1\n1 0 0 0 0 0 0 1"); }) == 3);
  CHECK(error_line([] { parse_tum("1 0 0 0 0 0 0 1\n0.5 0 0 0 0 0 0 1"); }) == 2);
  CHECK(error_line([] { parse_tum("1 0 0 0 0 0 0 nan"); }) == 1);
  CHECK(error_line([] { parse_tum("-1 0 0 0 0 0 0 1"); }) == 1);
  CHECK(error_text([] { parse_tum("0 0 0 0 0 0 0 0.99"); }).find("invalid quaternion") !=
        std::string::npos);
  CHECK(error_text([] { parse_tum("# only comments\n"); }).find("no poses") != std::string::npos);
}

TEST_CASE("parse_tum normalizes slightly off quaternions") {
  const Trajectory t = parse_tum("0 0 0 0 0 0 0 1.0005");
  CHECK(t[0].pose.orientation().w() == 1.0);
}

TEST_CASE("parse_kitti") {
  const Trajectory one = parse_kitti("1 0 0 0 0 1 0 0 0 0 1 0");
  REQUIRE(one.size() == 1);
  CHECK(one[0].timestamp == 0.0);
  CHECK(one[0].pose.rotation().matrix() == Mat3::Identity());

  const Trajectory two = parse_kitti("1 0 0 0 0 1 0 0 0 0 1 0\n1 0 0 5 0 1 0 6 0 0 1 7\n");
  REQUIRE(two.size() == 2);
  CHECK(two[1].timestamp == 0.1);
  CHECK(two[1].pose.translation() == Vec3(5, 6, 7));
  CHECK(two.format() == TrajectoryFormat::kKitti);

  const Trajectory three = parse_kitti(
      "1 0 0 0 0 1 0 0 0 0 1 0\n1 0 0 0 0 1 0 0 0 0 1 0\n1 0 0 0 0 1 0 0 0 0 1 0\n");
  CHECK(three[2].timestamp == 0.2);

  CHECK(error_line([] { parse_kitti("1 0 0 0 0 1 0 0 0 0 1"); }) == 1);
  CHECK(error_text([] { parse_kitti("1 0 0 0 0 1 0 0 0 0 -1 0"); }).find("reflection in pose") !=
        std::string::npos);
  CHECK(error_text([] { parse_kitti("1.1 0 0 0 0 1 0 0 0 0 1 0"); }).find("orthonormal") !=
        std::string::npos);

  // Rounded rotation blocks are projected back onto SO(3).
  const Trajectory rounded = parse_kitti("0.9999 0.0001 0 0 0 1 0 0 0 0 1 0");
  const Mat3 r = rounded[0].pose.rotation().matrix();
  CHECK(oracle::max_abs_diff(r.transpose() * r, Mat3::Identity()) < 1e-12);
}

TEST_CASE("parse_euroc") {
  const Trajectory one = parse_euroc("ts,px,py,pz,qw,qx,qy,qz\n1000000000,0,0,0,1,0,0,0");
  REQUIRE(one.size() == 1);
  CHECK(one[0].timestamp == 1.0);
  CHECK(one[0].pose.rotation().matrix() == Mat3::Identity());
  CHECK(one.format() == TrajectoryFormat::kEuroc);

  CHECK(error_text([] { parse_euroc("ts,px,py,pz,qw,qx,qy,qz\n1,0,0,0,0.5,0,0,0"); })
            .find("invalid quaternion") != std::string::npos);

  // Ground-truth files carry velocities and biases after the quaternion.
  const std::string gt =
      "#timestamp, p_RS_R_x [m], p_RS_R_y [m], p_RS_R_z [m], q_RS_w [], q_RS_x [], q_RS_y [], "
      "q_RS_z [], v_RS_R_x [m s^-1], v_RS_R_y [m s^-1], v_RS_R_z [m s^-1], b_w_RS_S_x, "
      "b_w_RS_S_y, b_w_RS_S_z, b_a_RS_S_x, b_a_RS_S_y, b_a_RS_S_z\n"
      "1403636579758555392,4.688319,-1.786938,0.783338,0.534108,-0.153029,-0.827383,-0.082152,"
      "-0.027876,0.033207,0.800006,-0.003172,0.021267,0.078502,-0.025266,0.136696,0.075593\r\n";
  const Trajectory g = parse_euroc(gt);
  REQUIRE(g.size() == 1);
  CHECK(g[0].pose.translation().isApprox(Vec3(4.688319, -1.786938, 0.783338)));
  CHECK(g[0].timestamp == 1403636579.7585554);
  // quaternion columns are w, x, y, z
  const UnitQuaternion& q = g[0].pose.orientation();
  CHECK(q.w() == doctest::Approx(0.534108).epsilon(1e-5));
  CHECK(q.y() == doctest::Approx(-0.827383).epsilon(1e-5));

  CHECK(error_line([] { parse_euroc("#h\n1,0,0,0,1,0,0"); }) == 2);
  CHECK(error_line([] { parse_euroc("#h\n1.5,0,0,0,1,0,0,0"); }) == 2);
}

TEST_CASE("parse_euroc without a header warns and still parses") {
  ParseDiagnostics diag;
  const Trajectory t = parse_euroc("5,0,0,0,1,0,0,0\n6,0,0,0,1,0,0,0\n", {}, &diag);
  CHECK(t.size() == 2);
  REQUIRE(diag.warnings.size() == 1);
  CHECK(diag.warnings[0].find("header") != std::string::npos);
}

TEST_CASE("EuRoC nanoseconds convert to correctly rounded seconds") {
  // Frozen from exact decimal arithmetic: float(Decimal(ns) / 10**9).
  CHECK(parse_euroc("#\n1403715273262142976,0,0,0,1,0,0,0")[0].timestamp == 1403715273.262143);
  CHECK(parse_euroc("#\n9007199254740993,0,0,0,1,0,0,0")[0].timestamp == 9007199.254740993);
  CHECK(parse_euroc("#\n1,0,0,0,1,0,0,0")[0].timestamp == 1e-9);

  // Below 2^53 both operands of ns / 1e9 are exact, so IEEE division is the
  // correctly rounded reference.
  Rng rng(123);
  for (int i = 0; i < 2000; ++i) {
    const auto ns = static_cast<std::int64_t>(rng.next() >> 11);
    const std::string text = "#h\n" + std::to_string(ns) + ",0,0,0,1,0,0,0";
    CHECK(parse_euroc(text)[0].timestamp == static_cast<double>(ns) / 1e9);
  }
}

TEST_CASE("write_tum output and round-trip") {
  const Trajectory id = parse_tum("0 0 0 0 0 0 0 1");
  const std::string text = write_tum(id);
  CHECK(text.find("\n0 0 0 0 0 0 0 1\n") != std::string::npos);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Trajectory t = random_trajectory(seed, 300);
    const std::string first = write_tum(t);
    const Trajectory back = parse_tum(first);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(std::abs(back[i].timestamp - t[i].timestamp) < 1e-12);
      CHECK((back[i].pose.translation() - t[i].pose.translation()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(oracle::max_abs_diff(back[i].pose.rotation().matrix(),
                                 t[i].pose.rotation().matrix()) < 1e-12);
    }
    CHECK(write_tum(back) == first);
  }
}

TEST_CASE("empty trajectories are rejected") {
  CHECK_THROWS_AS(Trajectory({}), Error);
  CHECK_THROWS_AS(parse_tum(""), ParseError);
}

TEST_CASE("format names") {
  CHECK(format_from_string("kitti") == TrajectoryFormat::kKitti);
  CHECK(!format_from_string("csv").has_value());
  CHECK(to_string(TrajectoryFormat::kEuroc) == "euroc");
}

#include "trajeval/parsers.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <system_error>

#include "trajeval/error.hpp"

namespace trajeval {

namespace {

constexpr double kQuaternionNormTolerance = 1e-3;
constexpr double kKittiOrthoTolerance = 1e-3;
constexpr double kKittiRate = 10.0;  // Hz

// Splits text into lines, accepting '\n' and "\r\n" endings. Calls
// fn(line_number, line) for every line including blank ones.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    pos = end + 1;
  }
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_blank_or_comment(std::string_view line) {
  const std::string_view t = trim(line);
  return t.empty() || t.front() == '#';
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

double parse_real(std::string_view token, std::size_t line) {
  if (auto v = to_double(token)) return *v;
  throw ParseError(line, "non-numeric token '" + std::string(token) + "'");
}

UnitQuaternion parse_quaternion(double w, double x, double y, double z, std::size_t line) {
  const double norm = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(std::abs(norm - 1.0) <= kQuaternionNormTolerance)) {
    throw ParseError(line, "invalid quaternion (norm " + std::to_string(norm) + ")");
  }
  return {w, x, y, z};
}

// Correctly rounded ns * 1e-9 for any int64 input: the decimal string
// "<s>.<9 digits>" is converted by from_chars, which rounds exactly once.
double nanoseconds_to_seconds(std::int64_t ns) {
  char buf[48];
  char* p = std::to_chars(buf, buf + 24, ns / 1'000'000'000).ptr;
  *p++ = '.';
  const auto frac = static_cast<std::uint32_t>(ns % 1'000'000'000);
  char digits[16];
  char* dend = std::to_chars(digits, digits + sizeof(digits), frac).ptr;
  for (std::ptrdiff_t pad = 9 - (dend - digits); pad > 0; --pad) *p++ = '0';
  for (char* d = digits; d != dend; ++d) *p++ = *d;
  double seconds = 0.0;
  std::from_chars(buf, p, seconds);
  return seconds;
}

// Accumulates poses and enforces the trajectory invariants with line context.
class PoseCollector {
 public:
  void add(double timestamp, Pose pose, std::size_t line) {
    if (!(timestamp >= 0.0)) {
      throw ParseError(line, "negative timestamp");
    }
    if (!poses_.empty() && !(timestamp > poses_.back().timestamp)) {
      throw ParseError(line, "timestamps must be strictly increasing");
    }
    poses_.push_back({timestamp, std::move(pose)});
  }

  Trajectory finish(TrajectoryFormat format, std::string name, std::size_t lines) && {
    if (poses_.empty()) {
      throw ParseError(lines, "no poses found");
    }
    return Trajectory(std::move(poses_), format, std::move(name));
  }

  std::size_t size() const { return poses_.size(); }

 private:
  std::vector<StampedPose> poses_;
};

}  // namespace

std::string_view to_string(TrajectoryFormat format) {
  switch (format) {
    case TrajectoryFormat::kTum: return "tum";
    case TrajectoryFormat::kKitti: return "kitti";
    case TrajectoryFormat::kEuroc: return "euroc";
  }
  return "tum";
}

std::optional<TrajectoryFormat> format_from_string(std::string_view name) {
  if (name == "tum") return TrajectoryFormat::kTum;
  if (name == "kitti") return TrajectoryFormat::kKitti;
  if (name == "euroc") return TrajectoryFormat::kEuroc;
  return std::nullopt;
}

Trajectory::Trajectory(std::vector<StampedPose> poses, TrajectoryFormat format,
                       std::string name)
    : poses_(std::move(poses)), format_(format), name_(std::move(name)) {
  if (poses_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "trajectory is empty");
  }
  for (std::size_t i = 0; i < poses_.size(); ++i) {
    const double t = poses_[i].timestamp;
    if (!std::isfinite(t) || t < 0.0) {
      throw Error(ErrorKind::kInvalidArgument, "trajectory timestamp must be finite and >= 0");
    }
    if (i > 0 && !(t > poses_[i - 1].timestamp)) {
      throw Error(ErrorKind::kInvalidArgument, "trajectory timestamps must be strictly increasing");
    }
  }
}

Trajectory parse_tum(std::string_view text, std::string name, ParseDiagnostics*) {
  PoseCollector poses;
  std::size_t lines = 0;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    lines = line_no;
    if (is_blank_or_comment(line)) return;
    const auto f = split_whitespace(line);
    if (f.size() != 8) {
      throw ParseError(line_no, "expected 8 fields, found " + std::to_string(f.size()));
    }
    double v[8];
    for (int i = 0; i < 8; ++i) v[i] = parse_real(f[i], line_no);
    const UnitQuaternion q = parse_quaternion(v[7], v[4], v[5], v[6], line_no);
    poses.add(v[0], Pose(q, Vec3(v[1], v[2], v[3])), line_no);
  });
  return std::move(poses).finish(TrajectoryFormat::kTum, std::move(name), lines);
}

Trajectory parse_kitti(std::string_view text, std::string name, ParseDiagnostics*) {
  PoseCollector poses;
  std::size_t lines = 0;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    lines = line_no;
    if (is_blank_or_comment(line)) return;
    const auto f = split_whitespace(line);
    if (f.size() != 12) {
      throw ParseError(line_no, "expected 12 fields, found " + std::to_string(f.size()));
    }
    double v[12];
    for (int i = 0; i < 12; ++i) v[i] = parse_real(f[i], line_no);
    Mat3 r;
    r << v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10];
    if (r.determinant() < 0.0) {
      throw ParseError(line_no, "reflection in pose");
    }
    const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (ortho > kKittiOrthoTolerance) {
      throw ParseError(line_no, "rotation block is not orthonormal");
    }
    const double stamp = static_cast<double>(poses.size()) / kKittiRate;
    poses.add(stamp, Pose(RotationMatrix::nearest(r), Vec3(v[3], v[7], v[11])), line_no);
  });
  return std::move(poses).finish(TrajectoryFormat::kKitti, std::move(name), lines);
}

Trajectory parse_euroc(std::string_view text, std::string name,
                       ParseDiagnostics* diagnostics) {
  PoseCollector poses;
  std::size_t lines = 0;
  bool seen_first = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    lines = line_no;
    const std::string_view t = trim(line);
    if (t.empty()) return;
    const auto f = split_csv(t);
    if (!seen_first) {
      seen_first = true;
      std::int64_t probe = 0;
      const auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), probe);
      const bool numeric = ec == std::errc{} && ptr == f[0].data() + f[0].size();
      if (t.front() == '#' || !numeric) return;  // header
      if (diagnostics) {
        diagnostics->warnings.push_back("line " + std::to_string(line_no) +
                                        ": missing EuRoC header; parsing as data");
      }
    } else if (t.front() == '#') {
      return;
    }
    if (f.size() < 8) {
      throw ParseError(line_no, "expected at least 8 columns, found " + std::to_string(f.size()));
    }
    std::int64_t ns = 0;
    const auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), ns);
    if (ec != std::errc{} || ptr != f[0].data() + f[0].size()) {
      throw ParseError(line_no, "timestamp must be integer nanoseconds, got '" +
                                    std::string(f[0]) + "'");
    }
    if (ns < 0) {
      throw ParseError(line_no, "negative timestamp");
    }
    double v[7];
    for (int i = 0; i < 7; ++i) v[i] = parse_real(f[i + 1], line_no);
    const UnitQuaternion q = parse_quaternion(v[3], v[4], v[5], v[6], line_no);
    poses.add(nanoseconds_to_seconds(ns), Pose(q, Vec3(v[0], v[1], v[2])), line_no);
  });
  return std::move(poses).finish(TrajectoryFormat::kEuroc, std::move(name), lines);
}

Trajectory parse_trajectory(std::string_view text, TrajectoryFormat format,
                            std::string name, ParseDiagnostics* diagnostics) {
  switch (format) {
    case TrajectoryFormat::kTum: return parse_tum(text, std::move(name), diagnostics);
    case TrajectoryFormat::kKitti: return parse_kitti(text, std::move(name), diagnostics);
    case TrajectoryFormat::kEuroc: return parse_euroc(text, std::move(name), diagnostics);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown trajectory format");
}

std::string write_tum(const Trajectory& trajectory) {
  std::string out = "# timestamp tx ty tz qx qy qz qw\n";
  char buf[32];
  const auto put = [&](double v, char sep) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
    out.push_back(sep);
  };
  for (const StampedPose& sp : trajectory) {
    const Vec3& t = sp.pose.translation();
    const UnitQuaternion& q = sp.pose.orientation();
    put(sp.timestamp, ' ');
    put(t.x(), ' ');
    put(t.y(), ' ');
    put(t.z(), ' ');
    put(q.x(), ' ');
    put(q.y(), ' ');
    put(q.z(), ' ');
    put(q.w(), '\n');
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

Trajectory load_trajectory(const std::filesystem::path& path, TrajectoryFormat format,
                           ParseDiagnostics* diagnostics) {
  return parse_trajectory(read_text_file(path), format, path.filename().string(),
                          diagnostics);
}

}  // namespace trajeval

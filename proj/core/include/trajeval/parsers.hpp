#pragma once

// Trajectory containers and the TUM / KITTI / EuRoC text formats.
//
//   TUM    "timestamp tx ty tz qx qy qz qw" per line, '#' comments.
//   KITTI  12 reals per line, row-major [R|t]; no time column, so pose i is
//          stamped i / 10 seconds (the dataset's 10 Hz capture rate).
//   EuRoC  CSV with a header line: timestamp[ns], px, py, pz, qw, qx, qy, qz,
//          followed by any number of ignored columns.
//
// Quaternions whose norm is within 1e-3 of one are normalized on read;
// anything further off is rejected. Writers emit TUM only.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajeval/geometry.hpp"

namespace trajeval {

enum class TrajectoryFormat { kTum, kKitti, kEuroc };

std::string_view to_string(TrajectoryFormat format);
std::optional<TrajectoryFormat> format_from_string(std::string_view name);

struct StampedPose {
  double timestamp = 0.0;  // seconds
  Pose pose;
};

/// Non-empty, strictly time-ordered pose sequence.
class Trajectory {
 public:
  /// Throws Error(kInvalidArgument) if empty, if any stamp is negative or
  /// non-finite, or if stamps are not strictly increasing.
  explicit Trajectory(std::vector<StampedPose> poses,
                      TrajectoryFormat format = TrajectoryFormat::kTum,
                      std::string name = {});

  std::size_t size() const { return poses_.size(); }
  const StampedPose& operator[](std::size_t i) const { return poses_[i]; }
  const std::vector<StampedPose>& poses() const { return poses_; }
  auto begin() const { return poses_.begin(); }
  auto end() const { return poses_.end(); }

  TrajectoryFormat format() const { return format_; }
  const std::string& name() const { return name_; }

 private:
  std::vector<StampedPose> poses_;
  TrajectoryFormat format_;
  std::string name_;
};

/// Non-fatal findings, e.g. a EuRoC file without its header line.
struct ParseDiagnostics {
  std::vector<std::string> warnings;
};

// All parsers throw ParseError naming the offending 1-based line.
Trajectory parse_tum(std::string_view text, std::string name = {},
                     ParseDiagnostics* diagnostics = nullptr);
Trajectory parse_kitti(std::string_view text, std::string name = {},
                       ParseDiagnostics* diagnostics = nullptr);
Trajectory parse_euroc(std::string_view text, std::string name = {},
                       ParseDiagnostics* diagnostics = nullptr);
Trajectory parse_trajectory(std::string_view text, TrajectoryFormat format,
                            std::string name = {},
                            ParseDiagnostics* diagnostics = nullptr);

/// One line per pose with shortest round-trip decimal formatting, so
/// parse_tum(write_tum(t)) reproduces every field bit-for-bit.
std::string write_tum(const Trajectory& trajectory);

/// Reads the whole file; throws Error(kIo) when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
Trajectory load_trajectory(const std::filesystem::path& path, TrajectoryFormat format,
                           ParseDiagnostics* diagnostics = nullptr);

}  // namespace trajeval

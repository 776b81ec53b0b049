#pragma once

// Evaluation report: the machine-readable result of `trajeval ape`.
//
// Serialized as JSON. Doubles are written in shortest round-trip form, so a
// report read back compares equal field by field. No wall-clock data is
// stored; equal inputs and flags give byte-identical files.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "trajeval/alignment.hpp"
#include "trajeval/association.hpp"
#include "trajeval/geometry.hpp"
#include "trajeval/metrics.hpp"

namespace trajeval::cli {

inline constexpr std::string_view kReportSchema = "trajeval.report/1";

struct InputInfo {
  std::string file;  // file name only, so reports do not depend on the working directory
  std::string format;
  std::string sha256;
  std::size_t poses = 0;

  friend bool operator==(const InputInfo&, const InputInfo&) = default;
};

struct AssociationInfo {
  double max_diff = 0.0;
  double offset = 0.0;
  bool pair_by_index = false;
  std::size_t pairs = 0;
  std::size_t unmatched_reference = 0;
  std::size_t unmatched_estimate = 0;

  friend bool operator==(const AssociationInfo&, const AssociationInfo&) = default;
};

struct AlignmentInfo {
  AlignmentMode mode = AlignmentMode::kNone;
  double scale = 1.0;
  UnitQuaternion rotation;  // (w, x, y, z)
  Vec3 translation = Vec3::Zero();
  double residual_msse = 0.0;

  friend bool operator==(const AlignmentInfo&, const AlignmentInfo&) = default;
};

/// Matched positions ordered like the error series.
struct PairedPaths {
  std::vector<Vec3> reference;
  std::vector<Vec3> estimate;  // after alignment
};

struct Report {
  std::string name;
  std::string tool_version;
  InputInfo reference;
  InputInfo estimate;
  AssociationInfo association;
  AlignmentInfo alignment;
  ErrorStats stats;
  std::optional<ErrorSeries> series;
  std::optional<PairedPaths> paths;
};

nlohmann::ordered_json to_json(const Report& report);

/// Throws Error(kSchema) on a schema mismatch or a missing/mistyped field.
Report report_from_json(const nlohmann::json& j);

/// Two-space indented JSON with a trailing newline.
std::string dump_report(const Report& report);

/// Throws Error(kIo) if unreadable, Error(kParse) if not JSON, Error(kSchema)
/// as report_from_json.
Report read_report(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace trajeval::cli

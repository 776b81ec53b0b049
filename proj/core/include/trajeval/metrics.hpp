#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trajeval/association.hpp"
#include "trajeval/parsers.hpp"

namespace trajeval {

/// Per-pair translational errors (m), ordered by reference stamp.
struct ErrorSeries {
  std::vector<double> timestamps;  // reference stamps, s
  std::vector<double> errors;

  std::size_t size() const { return errors.size(); }
};

/// Equal-width bins; edges.size() == counts.size() + 1. The last bin is
/// closed on the right. A zero-width range is widened to [v - 0.5, v + 0.5].
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

struct ErrorStats {
  double rmse = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
  double sse = 0.0;
  std::size_t count = 0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  Histogram histogram;
};

/// Descriptive statistics of non-negative finite values. Values are sorted
/// before any summation, so the result does not depend on input order.
/// Quartiles use linear interpolation between order statistics; the
/// histogram has ceil(sqrt(n)) bins over [min, max].
/// Throws Error(kInvalidArgument) on an empty input.
ErrorStats compute_stats(std::span<const double> values);

/// Absolute trajectory error, translation part: |t_ref - t_est| for every
/// correspondence. The estimate must already be aligned.
std::pair<ErrorSeries, ErrorStats> ate_translation(const Trajectory& est_aligned,
                                                   const Trajectory& ref,
                                                   const Correspondences& corr);

struct RunSummary {
  std::string name;
  ErrorStats stats;
};

struct ComparisonRow {
  std::string name;
  double rmse = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

/// One row per run plus a "Mean" row: the arithmetic mean of each per-run
/// field (count is the total over runs).
struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  ComparisonRow mean;
};

/// Throws Error(kInvalidArgument) when `runs` is empty.
ComparisonTable compare_runs(std::span<const RunSummary> runs);

}  // namespace trajeval

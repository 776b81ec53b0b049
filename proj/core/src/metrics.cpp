#include "trajeval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "trajeval/error.hpp"

namespace trajeval {

namespace {

// Linear interpolation between order statistics at position p * (n - 1).
double quantile_sorted(const std::vector<double>& v, double p) {
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

Histogram histogram_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  double lo = v.front();
  double hi = v.back();
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = lo + width * static_cast<double>(i);
  }
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double x : v) {
    auto idx = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
    ++h.counts[std::min(idx, bins - 1)];
  }
  return h;
}

}  // namespace

ErrorStats compute_stats(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no values to summarize");
  }
  std::vector<double> v(values.begin(), values.end());
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw Error(ErrorKind::kInvalidArgument, "error values must be finite and >= 0");
    }
  }
  std::sort(v.begin(), v.end());

  const auto n = static_cast<double>(v.size());
  double sum = 0.0;
  double sse = 0.0;
  for (double x : v) {
    sum += x;
    sse += x * x;
  }
  ErrorStats s;
  s.count = v.size();
  s.sse = sse;
  s.mean = sum / n;
  s.rmse = std::sqrt(sse / n);
  double dev = 0.0;
  for (double x : v) dev += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(dev / n);
  s.min = v.front();
  s.max = v.back();
  s.q1 = quantile_sorted(v, 0.25);
  s.q2 = quantile_sorted(v, 0.5);
  s.q3 = quantile_sorted(v, 0.75);
  s.median = s.q2;
  s.histogram = histogram_sorted(v);
  return s;
}

std::pair<ErrorSeries, ErrorStats> ate_translation(const Trajectory& est_aligned,
                                                   const Trajectory& ref,
                                                   const Correspondences& corr) {
  if (corr.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no correspondences");
  }
  std::vector<IndexPair> pairs = corr.pairs;
  std::sort(pairs.begin(), pairs.end(),
            [](const IndexPair& a, const IndexPair& b) { return a.ref < b.ref; });

  ErrorSeries series;
  series.timestamps.reserve(pairs.size());
  series.errors.reserve(pairs.size());
  for (const IndexPair& p : pairs) {
    if (p.ref >= ref.size() || p.est >= est_aligned.size()) {
      throw Error(ErrorKind::kInvalidArgument, "correspondence index out of range");
    }
    const Vec3 d = ref[p.ref].pose.translation() - est_aligned[p.est].pose.translation();
    series.timestamps.push_back(ref[p.ref].timestamp);
    series.errors.push_back(d.norm());
  }
  ErrorStats stats = compute_stats(series.errors);
  return {std::move(series), std::move(stats)};
}

ComparisonTable compare_runs(std::span<const RunSummary> runs) {
  if (runs.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "nothing to compare");
  }
  ComparisonTable table;
  table.mean.name = "Mean";
  for (const RunSummary& r : runs) {
    const ErrorStats& s = r.stats;
    table.rows.push_back({r.name, s.rmse, s.mean, s.median, s.std, s.min, s.max, s.count});
    table.mean.rmse += s.rmse;
    table.mean.mean += s.mean;
    table.mean.median += s.median;
    table.mean.std += s.std;
    table.mean.min += s.min;
    table.mean.max += s.max;
    table.mean.count += s.count;
  }
  const auto k = static_cast<double>(runs.size());
  table.mean.rmse /= k;
  table.mean.mean /= k;
  table.mean.median /= k;
  table.mean.std /= k;
  table.mean.min /= k;
  table.mean.max /= k;
  return table;
}

}  // namespace trajeval

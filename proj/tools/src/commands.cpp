#include "commands.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "report.hpp"
#include "trajeval/alignment.hpp"
#include "trajeval/association.hpp"
#include "trajeval/metrics.hpp"
#include "trajeval/parsers.hpp"
#include "trajeval/synthgen.hpp"
#include "trajeval/version.hpp"

namespace trajeval::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kFormats{"tum", "kitti", "euroc"};
const std::vector<std::string> kModes{"none", "se3", "sim3", "sim3_golden"};
const std::vector<std::string> kShapes{"line", "circle", "random_walk"};

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::kIo, fmt::format("cannot open {} for writing", path.string()));
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error(ErrorKind::kIo, fmt::format("failed writing {}", path.string()));
}

struct Loaded {
  Trajectory trajectory;
  InputInfo info;
};

Loaded load(const fs::path& path, const std::string& format_name, std::ostream& err) {
  const TrajectoryFormat format = *format_from_string(format_name);
  const std::string text = read_text_file(path);
  ParseDiagnostics diag;
  try {
    Trajectory t = parse_trajectory(text, format, path.stem().string(), &diag);
    for (const std::string& w : diag.warnings) fmt::print(err, "warning: {}: {}\n", path.string(), w);
    InputInfo info{path.filename().string(), format_name, sha256_hex(text), t.size()};
    return {std::move(t), std::move(info)};
  } catch (const ParseError& e) {
    throw Error(ErrorKind::kParse, fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string csv_header() { return "name,rmse,mean,median,std,min,max,count\n"; }

std::string csv_row(const ComparisonRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{}\n", r.name, r.rmse, r.mean, r.median, r.std, r.min,
                     r.max, r.count);
}

ComparisonRow row_of(const std::string& name, const ErrorStats& s) {
  return {name, s.rmse, s.mean, s.median, s.std, s.min, s.max, s.count};
}

void print_stats(std::ostream& out, const Report& r) {
  const AlignmentInfo& a = r.alignment;
  fmt::print(out, "name         {}\n", r.name);
  fmt::print(out, "reference    {} ({}, {} poses)\n", r.reference.file, r.reference.format,
             r.reference.poses);
  fmt::print(out, "estimate     {} ({}, {} poses)\n", r.estimate.file, r.estimate.format,
             r.estimate.poses);
  fmt::print(out, "pairs        {} (unmatched: reference {}, estimate {})\n",
             r.association.pairs, r.association.unmatched_reference,
             r.association.unmatched_estimate);
  fmt::print(out, "alignment    {}\n", to_string(a.mode));
  fmt::print(out, "  scale      {}\n", a.scale);
  fmt::print(out, "  rotation   {} {} {} {} (w x y z)\n", a.rotation.w(), a.rotation.x(),
             a.rotation.y(), a.rotation.z());
  fmt::print(out, "  translation {} {} {}\n", a.translation.x(), a.translation.y(),
             a.translation.z());
  fmt::print(out, "APE translation (m)\n");
  const ErrorStats& s = r.stats;
  fmt::print(out, "  rmse       {:.6f}\n", s.rmse);
  fmt::print(out, "  mean       {:.6f}\n", s.mean);
  fmt::print(out, "  median     {:.6f}\n", s.median);
  fmt::print(out, "  std        {:.6f}\n", s.std);
  fmt::print(out, "  min        {:.6f}\n", s.min);
  fmt::print(out, "  max        {:.6f}\n", s.max);
  fmt::print(out, "  sse        {:.6f}\n", s.sse);
  fmt::print(out, "  count      {}\n", s.count);
}

// ---------------------------------------------------------------- ape

struct ApeOptions {
  std::string ref_path;
  std::string est_path;
  std::string format = "tum";
  std::string ref_format;
  std::string est_format;
  std::string align = "sim3";
  double max_diff = 0.02;
  double offset = 0.0;
  bool pair_by_index = false;
  std::string name;
  std::string out_report;
  std::string out_csv;
  bool no_series = false;
};

int cmd_ape(const ApeOptions& o, std::ostream& out, std::ostream& err) {
  const Loaded ref = load(o.ref_path, o.ref_format.empty() ? o.format : o.ref_format, err);
  const Loaded est = load(o.est_path, o.est_format.empty() ? o.format : o.est_format, err);

  const AssociationParams params{o.max_diff, o.offset, o.pair_by_index};
  const Correspondences corr = associate(ref.trajectory, est.trajectory, params);
  const AlignmentMode mode = *alignment_mode_from_string(o.align);
  const TrajectoryAlignment aligned =
      align_trajectories(est.trajectory, ref.trajectory, corr, mode);
  auto [series, stats] = ate_translation(aligned.aligned, ref.trajectory, corr);

  Report r;
  r.name = o.name.empty() ? fs::path(o.est_path).stem().string() : o.name;
  r.tool_version = std::string(kVersion);
  r.reference = ref.info;
  r.estimate = est.info;
  r.association = {params.max_diff, params.offset, params.pair_by_index,
                   corr.size(),     corr.unmatched_ref, corr.unmatched_est};
  const SimilarityTransform& t = aligned.result.transform;
  r.alignment = {mode, t.scale(), rotmat_to_quat(t.rotation()), t.translation(),
                 aligned.result.residual_msse};
  r.stats = std::move(stats);
  if (!o.no_series) {
    std::vector<IndexPair> pairs = corr.pairs;
    std::sort(pairs.begin(), pairs.end(),
              [](const IndexPair& a, const IndexPair& b) { return a.ref < b.ref; });
    PairedPaths paths;
    for (const IndexPair& p : pairs) {
      paths.reference.push_back(ref.trajectory[p.ref].pose.translation());
      paths.estimate.push_back(aligned.aligned[p.est].pose.translation());
    }
    r.series = std::move(series);
    r.paths = std::move(paths);
  }

  print_stats(out, r);
  if (!o.out_report.empty()) {
    write_file(o.out_report, dump_report(r));
    fmt::print(err, "report written to {}\n", o.out_report);
  }
  if (!o.out_csv.empty()) {
    write_file(o.out_csv, csv_header() + csv_row(row_of(r.name, r.stats)));
    fmt::print(err, "csv written to {}\n", o.out_csv);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const std::vector<std::string>& paths, const std::string& out_csv,
                std::ostream& out, std::ostream& err) {
  std::vector<RunSummary> runs;
  for (const std::string& p : paths) {
    Report r = read_report(p);
    runs.push_back({r.name, std::move(r.stats)});
  }
  const ComparisonTable table = compare_runs(runs);

  std::size_t width = 4;
  for (const ComparisonRow& row : table.rows) width = std::max(width, row.name.size());
  const auto line = [&](const ComparisonRow& row) {
    fmt::print(out, "{:<{}}  {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f} {:>8}\n",
               row.name, width, row.rmse, row.mean, row.median, row.std, row.min, row.max,
               row.count);
  };
  fmt::print(out, "{:<{}}  {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8}\n", "name", width,
             "rmse", "mean", "median", "std", "min", "max", "count");
  for (const ComparisonRow& row : table.rows) line(row);
  line(table.mean);

  if (!out_csv.empty()) {
    std::string csv = csv_header();
    for (const ComparisonRow& row : table.rows) csv += csv_row(row);
    csv += csv_row(table.mean);
    write_file(out_csv, csv);
    fmt::print(err, "csv written to {}\n", out_csv);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- convert

int cmd_convert(const std::string& in, const std::string& in_format, const std::string& out_path,
                std::ostream& err) {
  const Loaded t = load(in, in_format, err);
  write_file(out_path, write_tum(t.trajectory));
  fmt::print(err, "{} poses written to {}\n", t.trajectory.size(), out_path);
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
  std::string shape = "circle";
  std::size_t n = 100;
  double dt = 0.1;
  std::uint64_t seed = 0;
  double noise_t = 0.0;
  double noise_r = 0.0;
  double scale = 1.0;
  std::array<double, 3> rotvec{0.0, 0.0, 0.0};
  std::array<double, 3> translation{0.0, 0.0, 0.0};
  std::string out_gt;
  std::string out_est;
};

int cmd_synth(const SynthOptions& o, std::ostream& err) {
  SynthSpec spec;
  spec.shape = *synth_shape_from_string(o.shape);
  spec.n = o.n;
  spec.dt = o.dt;
  spec.seed = o.seed;
  spec.noise_sigma_t = o.noise_t;
  spec.noise_sigma_r = o.noise_r;
  const Vec3 w(o.rotvec[0], o.rotvec[1], o.rotvec[2]);
  const Vec3 t(o.translation[0], o.translation[1], o.translation[2]);
  if (!w.allFinite() || !t.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "transform values must be finite");
  }
  spec.applied_transform = SimilarityTransform(o.scale, so3_exp(w), t);
  const SynthPair pair = generate(spec);
  write_file(o.out_gt, write_tum(pair.ground_truth));
  write_file(o.out_est, write_tum(pair.estimate));
  fmt::print(err, "{} poses written to {} and {}\n", spec.n, o.out_gt, o.out_est);
  return kExitOk;
}

// ---------------------------------------------------------------- plotdata

int cmd_plotdata(const std::string& report_path, const std::string& prefix, std::ostream& err) {
  const Report r = read_report(report_path);
  if (!r.series || !r.paths) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("{}: series not stored (report written with --no-series)",
                            report_path));
  }
  const ErrorStats& s = r.stats;

  std::string series = "# timestamp_s error_m\n";
  for (std::size_t i = 0; i < r.series->size(); ++i) {
    series += fmt::format("{} {}\n", r.series->timestamps[i], r.series->errors[i]);
  }

  const std::string box = fmt::format("# min q1 median q3 max\n{} {} {} {} {}\n", s.min, s.q1,
                                      s.median, s.q3, s.max);

  std::string hist = "# lower_m upper_m count\n";
  for (std::size_t i = 0; i < s.histogram.counts.size(); ++i) {
    hist += fmt::format("{} {} {}\n", s.histogram.edges[i], s.histogram.edges[i + 1],
                        s.histogram.counts[i]);
  }

  std::string paths = "# timestamp_s ref_x ref_y ref_z est_x est_y est_z\n";
  for (std::size_t i = 0; i < r.paths->reference.size(); ++i) {
    const Vec3& a = r.paths->reference[i];
    const Vec3& b = r.paths->estimate[i];
    paths += fmt::format("{} {} {} {} {} {} {}\n", r.series->timestamps[i], a.x(), a.y(), a.z(),
                         b.x(), b.y(), b.z());
  }

  const std::array<std::pair<std::string, const std::string*>, 4> files{
      {{"_series.txt", &series}, {"_box.txt", &box}, {"_hist.txt", &hist}, {"_paths.txt", &paths}}};
  for (const auto& [suffix, text] : files) {
    const std::string path = prefix + suffix;
    write_file(path, *text);
    fmt::print(err, "wrote {}\n", path);
  }
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kIo:
      return kExitUsage;
    case ErrorKind::kParse:
    case ErrorKind::kSchema:
      return kExitParse;
    case ErrorKind::kNoOverlap:
      return kExitNoOverlap;
    case ErrorKind::kUnderdetermined:
    case ErrorKind::kDegenerate:
      return kExitDegenerate;
    case ErrorKind::kNumerical:
    case ErrorKind::kBehindCamera:
      return kExitFailure;
  }
  return kExitFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trajectory evaluation: alignment, absolute trajectory error and reports",
               "trajeval"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ApeOptions ape;
  CLI::App* ape_cmd = app.add_subcommand("ape", "Absolute pose error of EST against REF");
  ape_cmd->add_option("ref", ape.ref_path, "Reference (ground truth) file")->required();
  ape_cmd->add_option("est", ape.est_path, "Estimated trajectory file")->required();
  ape_cmd->add_option("--format", ape.format, "Format of both files")
      ->check(CLI::IsMember(kFormats))->capture_default_str();
  ape_cmd->add_option("--ref-format", ape.ref_format, "Format of the reference file")
      ->check(CLI::IsMember(kFormats));
  ape_cmd->add_option("--est-format", ape.est_format, "Format of the estimate file")
      ->check(CLI::IsMember(kFormats));
  ape_cmd->add_option("--align", ape.align, "Alignment model")
      ->check(CLI::IsMember(kModes))->capture_default_str();
  ape_cmd->add_option("--max-diff", ape.max_diff, "Association window in seconds")
      ->check(CLI::PositiveNumber)->capture_default_str();
  ape_cmd->add_option("--offset", ape.offset, "Seconds added to estimate stamps")
      ->capture_default_str();
  ape_cmd->add_flag("--pair-by-index", ape.pair_by_index, "Pair poses i<->i, ignoring stamps");
  ape_cmd->add_option("--name", ape.name, "Run name (default: estimate file stem)");
  ape_cmd->add_option("--out-report", ape.out_report, "Write a JSON report");
  ape_cmd->add_option("--out-csv", ape.out_csv, "Write a one-row CSV summary");
  ape_cmd->add_flag("--no-series", ape.no_series, "Leave the error series out of the report");

  std::vector<std::string> compare_paths;
  std::string compare_csv;
  CLI::App* compare_cmd = app.add_subcommand("compare", "Tabulate reports with a Mean row");
  compare_cmd->add_option("reports", compare_paths, "Report files")->required();
  compare_cmd->add_option("--out-csv", compare_csv, "Write the table as CSV");

  std::string convert_in;
  std::string convert_format;
  std::string convert_out;
  CLI::App* convert_cmd = app.add_subcommand("convert", "Rewrite a trajectory as TUM");
  convert_cmd->add_option("input", convert_in, "Input file")->required();
  convert_cmd->add_option("output", convert_out, "Output TUM file")->required();
  convert_cmd->add_option("--in-format", convert_format, "Input format")
      ->check(CLI::IsMember(kFormats))->required();

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Write a synthetic ground truth/estimate pair");
  synth_cmd->add_option("--shape", synth.shape, "Trajectory shape")
      ->check(CLI::IsMember(kShapes))->capture_default_str();
  synth_cmd->add_option("--n", synth.n, "Number of poses (>= 2)")->capture_default_str();
  synth_cmd->add_option("--dt", synth.dt, "Seconds between poses")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--noise-t", synth.noise_t, "Translation noise sigma, m")
      ->capture_default_str();
  synth_cmd->add_option("--noise-r", synth.noise_r, "Rotation noise sigma, rad")
      ->capture_default_str();
  synth_cmd->add_option("--scale", synth.scale, "Scale of the applied transform")
      ->capture_default_str();
  synth_cmd->add_option("--rotvec", synth.rotvec, "Rotation vector of the applied transform, rad");
  synth_cmd->add_option("--translation", synth.translation, "Translation of the applied transform, m");
  synth_cmd->add_option("--out-gt", synth.out_gt, "Ground-truth TUM output")->required();
  synth_cmd->add_option("--out-est", synth.out_est, "Estimate TUM output")->required();

  std::string plot_report;
  std::string plot_prefix;
  CLI::App* plot_cmd = app.add_subcommand("plotdata", "Write columnar files for plotting");
  plot_cmd->add_option("report", plot_report, "Report file")->required();
  plot_cmd->add_option("prefix", plot_prefix, "Output path prefix")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ape_cmd) return cmd_ape(ape, out, err);
    if (*compare_cmd) return cmd_compare(compare_paths, compare_csv, out, err);
    if (*convert_cmd) return cmd_convert(convert_in, convert_format, convert_out, err);
    if (*synth_cmd) return cmd_synth(synth, err);
    if (*plot_cmd) return cmd_plotdata(plot_report, plot_prefix, err);
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace trajeval::cli

#include "report.hpp"

#include <openssl/evp.h>

#include <fmt/format.h>

#include "trajeval/error.hpp"
#include "trajeval/parsers.hpp"

namespace trajeval::cli {

namespace {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

ojson vec_json(const Vec3& v) { return ojson::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorKind::kSchema, "malformed report: expected a 3-vector");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ojson input_json(const InputInfo& in) {
  return {{"file", in.file}, {"format", in.format}, {"sha256", in.sha256}, {"poses", in.poses}};
}

InputInfo input_from(const json& j) {
  return {j.at("file").get<std::string>(), j.at("format").get<std::string>(),
          j.at("sha256").get<std::string>(), j.at("poses").get<std::size_t>()};
}

ojson stats_json(const ErrorStats& s) {
  return {{"rmse", s.rmse},
          {"mean", s.mean},
          {"median", s.median},
          {"std", s.std},
          {"min", s.min},
          {"max", s.max},
          {"sse", s.sse},
          {"count", s.count},
          {"q1", s.q1},
          {"q2", s.q2},
          {"q3", s.q3},
          {"histogram", {{"edges", s.histogram.edges}, {"counts", s.histogram.counts}}}};
}

ErrorStats stats_from(const json& j) {
  ErrorStats s;
  s.rmse = j.at("rmse").get<double>();
  s.mean = j.at("mean").get<double>();
  s.median = j.at("median").get<double>();
  s.std = j.at("std").get<double>();
  s.min = j.at("min").get<double>();
  s.max = j.at("max").get<double>();
  s.sse = j.at("sse").get<double>();
  s.count = j.at("count").get<std::size_t>();
  s.q1 = j.at("q1").get<double>();
  s.q2 = j.at("q2").get<double>();
  s.q3 = j.at("q3").get<double>();
  s.histogram.edges = j.at("histogram").at("edges").get<std::vector<double>>();
  s.histogram.counts = j.at("histogram").at("counts").get<std::vector<std::size_t>>();
  return s;
}

Report parse_fields(const json& j) {
  Report r;
  r.name = j.at("name").get<std::string>();
  r.tool_version = j.at("tool_version").get<std::string>();
  r.reference = input_from(j.at("inputs").at("reference"));
  r.estimate = input_from(j.at("inputs").at("estimate"));

  const json& a = j.at("association");
  r.association = {a.at("max_diff").get<double>(),       a.at("offset").get<double>(),
                   a.at("pair_by_index").get<bool>(),    a.at("pairs").get<std::size_t>(),
                   a.at("unmatched_reference").get<std::size_t>(),
                   a.at("unmatched_estimate").get<std::size_t>()};

  const json& al = j.at("alignment");
  const auto mode = alignment_mode_from_string(al.at("mode").get<std::string>());
  if (!mode) throw Error(ErrorKind::kSchema, "malformed report: unknown alignment mode");
  const json& q = al.at("rotation_wxyz");
  if (!q.is_array() || q.size() != 4) {
    throw Error(ErrorKind::kSchema, "malformed report: rotation_wxyz needs 4 values");
  }
  r.alignment = {*mode, al.at("scale").get<double>(),
                 UnitQuaternion(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                                q[3].get<double>()),
                 vec_from(al.at("translation")), al.at("residual_msse").get<double>()};

  r.stats = stats_from(j.at("stats"));

  if (j.contains("series")) {
    ErrorSeries s;
    s.timestamps = j["series"].at("timestamps").get<std::vector<double>>();
    s.errors = j["series"].at("errors").get<std::vector<double>>();
    if (s.timestamps.size() != s.errors.size()) {
      throw Error(ErrorKind::kSchema, "malformed report: series columns differ in length");
    }
    r.series = std::move(s);
  }
  if (j.contains("paths")) {
    PairedPaths p;
    for (const json& v : j["paths"].at("reference")) p.reference.push_back(vec_from(v));
    for (const json& v : j["paths"].at("estimate")) p.estimate.push_back(vec_from(v));
    if (p.reference.size() != p.estimate.size()) {
      throw Error(ErrorKind::kSchema, "malformed report: path lengths differ");
    }
    r.paths = std::move(p);
  }
  return r;
}

}  // namespace

ojson to_json(const Report& r) {
  ojson j;
  j["schema"] = kReportSchema;
  j["tool_version"] = r.tool_version;
  j["name"] = r.name;
  j["inputs"] = {{"reference", input_json(r.reference)}, {"estimate", input_json(r.estimate)}};
  const AssociationInfo& a = r.association;
  j["association"] = {{"max_diff", a.max_diff},
                      {"offset", a.offset},
                      {"pair_by_index", a.pair_by_index},
                      {"pairs", a.pairs},
                      {"unmatched_reference", a.unmatched_reference},
                      {"unmatched_estimate", a.unmatched_estimate}};
  const AlignmentInfo& al = r.alignment;
  j["alignment"] = {
      {"mode", to_string(al.mode)},
      {"scale", al.scale},
      {"rotation_wxyz",
       ojson::array({al.rotation.w(), al.rotation.x(), al.rotation.y(), al.rotation.z()})},
      {"translation", vec_json(al.translation)},
      {"residual_msse", al.residual_msse}};
  j["stats"] = stats_json(r.stats);
  if (r.series) {
    j["series"] = {{"timestamps", r.series->timestamps}, {"errors", r.series->errors}};
  }
  if (r.paths) {
    ojson ref = ojson::array();
    ojson est = ojson::array();
    for (const Vec3& v : r.paths->reference) ref.push_back(vec_json(v));
    for (const Vec3& v : r.paths->estimate) est.push_back(vec_json(v));
    j["paths"] = {{"reference", std::move(ref)}, {"estimate", std::move(est)}};
  }
  return j;
}

Report report_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string()) {
    throw Error(ErrorKind::kSchema, "not a trajeval report: missing schema field");
  }
  const auto schema = j["schema"].get<std::string>();
  if (schema != kReportSchema) {
    throw Error(ErrorKind::kSchema, fmt::format("schema version mismatch: expected {}, found {}",
                                                kReportSchema, schema));
  }
  try {
    return parse_fields(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchema, fmt::format("malformed report: {}", e.what()));
  }
}

std::string dump_report(const Report& report) { return to_json(report).dump(2) + "\n"; }

Report read_report(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  try {
    return report_from_json(j);
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIo, "sha256 failed");
  }
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

}  // namespace trajeval::cli

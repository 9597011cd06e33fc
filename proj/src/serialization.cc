/*
 * Copyright 2026 The dynbps Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dynbps/serialization.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dynbps/errors.h"
#include "dynbps/mesh_io.h"

namespace dynbps {
namespace {

constexpr std::string_view kEncodingCsvHeader =
    "k,px,py,pz,vx,vy,vz,mag,interior";

Json ParseJsonText(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

double NumberAt(const Json& json, const char* what) {
  if (!json.is_number()) {
    throw ParseError(std::string("expected a number for ") + what);
  }
  const double v = json.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + " is not finite");
  return v;
}

Vec3 Vec3FromJson(const Json& json, const char* what) {
  if (!json.is_array() || json.size() != 3) {
    throw ParseError(std::string(what) + " must be an array of 3 numbers");
  }
  return Vec3(NumberAt(json[0], what), NumberAt(json[1], what),
              NumberAt(json[2], what));
}

Json Vec3ToJson(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

std::string_view Trim(std::string_view s) {
  const auto blank = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> ToDouble(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

// Column (1-based) where field `index` of `line` starts.
int FieldColumn(std::string_view line, std::size_t index) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < index; ++i) pos = line.find(',', pos) + 1;
  return static_cast<int>(pos) + 1;
}

template <typename Fn>
void ForEachCsvLine(std::string_view text, Fn&& fn) {
  int number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    if (!Trim(line).empty()) fn(line, number);
    pos = end + 1;
  }
}

std::vector<Mat3> ToDouble(const std::vector<Eigen::Matrix3i>& group) {
  std::vector<Mat3> out;
  for (const auto& m : group) out.push_back(m.cast<double>());
  return out;
}

}  // namespace

std::string FormatDouble(double value) {
  if (value == 0.0) return "0";  // no "-0"
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

Json PoseToJson(const Pose& pose) {
  const Eigen::Vector4d q = QuaternionFromRotation(pose.rotation);
  return Json{{"t", Vec3ToJson(pose.position)},
              {"q", Json::array({q[0], q[1], q[2], q[3]})}};
}

Pose PoseFromJson(const Json& json) {
  if (!json.is_object()) throw ParseError("pose must be a JSON object");
  Pose pose;
  if (json.contains("t")) pose.position = Vec3FromJson(json["t"], "pose t");
  if (json.contains("q")) {
    const Json& q = json["q"];
    if (!q.is_array() || q.size() != 4) {
      throw ParseError("pose q must be an array [w, x, y, z]");
    }
    Eigen::Vector4d wxyz;
    for (int i = 0; i < 4; ++i) wxyz[i] = NumberAt(q[i], "pose q");
    if (std::abs(wxyz.norm() - 1.0) > kInputRotationTolerance) {
      throw InvalidRotationError("pose quaternion is not unit length (norm " +
                                 FormatDouble(wxyz.norm()) + ")");
    }
    pose.rotation = RotationFromQuaternion(wxyz);
  } else if (json.contains("R")) {
    const Json& r = json["R"];
    if (!r.is_array() || r.size() != 3) {
      throw ParseError("pose R must be a 3x3 array of rows");
    }
    Mat3 m;
    for (int row = 0; row < 3; ++row) {
      m.row(row) = Vec3FromJson(r[row], "pose R row").transpose();
    }
    if (!IsRotation(m, kInputRotationTolerance)) {
      throw InvalidRotationError("pose matrix is not a rotation");
    }
    pose.rotation = Orthonormalize(m);
  }
  return pose;
}

Pose ParsePoseArgument(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '{') return PoseFromJson(ParseJsonText(text));
  if (text.find(',') != std::string_view::npos) {
    const auto fields = SplitCommas(text);
    if (fields.size() != 7) {
      throw ParseError("inline pose needs 7 numbers w,x,y,z,tx,ty,tz");
    }
    Json q = Json::array();
    Json t = Json::array();
    for (std::size_t i = 0; i < 7; ++i) {
      const auto v = ToDouble(fields[i]);
      if (!v) throw ParseError("inline pose field is not a number");
      (i < 4 ? q : t).push_back(*v);
    }
    return PoseFromJson(Json{{"q", q}, {"t", t}});
  }
  return PoseFromJson(ParseJsonText(ReadFile(std::string(text))));
}

std::string InteriorPolicyName(InteriorPolicy policy) {
  return policy == InteriorPolicy::kZero ? "zero" : "skip";
}

InteriorPolicy ParseInteriorPolicy(std::string_view name) {
  if (name == "zero") return InteriorPolicy::kZero;
  if (name == "skip") return InteriorPolicy::kSkip;
  throw ParseError("interior policy must be 'zero' or 'skip'");
}

Json EncodingToJson(const BasisPointSet& bps, const Pose& pose,
                    const BpsEncoding& encoding, InteriorPolicy policy,
                    const PoseJacobian* jacobian) {
  Json vectors = Json::array();
  for (const Vec3& v : encoding.vectors) vectors.push_back(Vec3ToJson(v));
  Json mask = Json::array();
  for (bool b : encoding.interior_mask) mask.push_back(b);

  Json out{
      {"grid",
       {{"points_per_axis", bps.points_per_axis},
        {"half_extent", bps.half_extent},
        {"spacing", bps.spacing()},
        {"count", bps.size()},
        {"order", "x-fastest"}}},
      {"poses", Json::array({PoseToJson(pose)})},
      {"interior_policy", InteriorPolicyName(policy)},
      {"vectors", vectors},
      {"magnitudes", encoding.magnitudes},
      {"interior_mask", mask},
  };
  if (jacobian != nullptr) {
    Json dx = Json::array();
    Json dw = Json::array();
    Json valid = Json::array();
    for (std::size_t k = 0; k < jacobian->size(); ++k) {
      dx.push_back(Vec3ToJson(jacobian->d_translation[k]));
      dw.push_back(Vec3ToJson(jacobian->d_rotation[k]));
      valid.push_back(static_cast<bool>(jacobian->valid[k]));
    }
    out["gradients"] = {
        {"d_translation", dx}, {"d_rotation", dw}, {"valid", valid}};
  }
  return out;
}

std::string EncodingToCsv(const BasisPointSet& bps,
                          const BpsEncoding& encoding) {
  std::string out(kEncodingCsvHeader);
  out += '\n';
  for (std::size_t k = 0; k < encoding.size(); ++k) {
    const Vec3& p = bps.points[k];
    const Vec3& v = encoding.vectors[k];
    out += std::to_string(k);
    for (double x : {p.x(), p.y(), p.z(), v.x(), v.y(), v.z(),
                     encoding.magnitudes[k]}) {
      out += ',';
      out += FormatDouble(x);
    }
    out += encoding.interior_mask[k] ? ",1\n" : ",0\n";
  }
  return out;
}

EncodingFile ParseEncodingJson(std::string_view text) {
  const Json json = ParseJsonText(text);
  if (!json.is_object() || !json.contains("grid") ||
      !json.contains("magnitudes")) {
    throw ParseError("encoding JSON needs 'grid' and 'magnitudes'");
  }
  EncodingFile file;
  const Json& grid = json["grid"];
  if (!grid.contains("points_per_axis") || !grid.contains("half_extent")) {
    throw ParseError("encoding grid needs points_per_axis and half_extent");
  }
  file.points_per_axis =
      static_cast<int>(NumberAt(grid["points_per_axis"], "points_per_axis"));
  file.half_extent = NumberAt(grid["half_extent"], "half_extent");

  const Json& mags = json["magnitudes"];
  if (!mags.is_array()) throw ParseError("magnitudes must be an array");
  const std::size_t n = mags.size();
  for (const Json& m : mags) {
    const double v = NumberAt(m, "magnitude");
    if (v < 0.0) throw ParseError("magnitudes must be nonnegative");
    file.encoding.magnitudes.push_back(v);
  }
  if (json.contains("vectors")) {
    if (json["vectors"].size() != n) {
      throw ParseError("vectors and magnitudes differ in length");
    }
    for (const Json& v : json["vectors"]) {
      file.encoding.vectors.push_back(Vec3FromJson(v, "vector"));
    }
  } else {
    file.encoding.vectors.assign(n, Vec3::Zero());
  }
  if (json.contains("interior_mask")) {
    if (json["interior_mask"].size() != n) {
      throw ParseError("interior_mask and magnitudes differ in length");
    }
    for (const Json& b : json["interior_mask"]) {
      if (!b.is_boolean()) throw ParseError("interior_mask entries are booleans");
      file.encoding.interior_mask.push_back(b.get<bool>());
    }
  } else {
    file.encoding.interior_mask.assign(n, false);
  }
  if (json.contains("poses") && json["poses"].is_array() &&
      !json["poses"].empty()) {
    file.pose = PoseFromJson(json["poses"][0]);
  }
  return file;
}

EncodingFile ParseEncodingCsv(std::string_view text) {
  EncodingFile file;
  bool header_seen = false;
  double max_coordinate = 0.0;
  ForEachCsvLine(text, [&](std::string_view line, int number) {
    if (!header_seen) {
      if (Trim(line) != kEncodingCsvHeader) {
        throw ParseError("expected header '" + std::string(kEncodingCsvHeader) +
                             "'",
                         number, 1);
      }
      header_seen = true;
      return;
    }
    const auto fields = SplitCommas(line);
    if (fields.size() != 9) {
      throw ParseError("expected 9 fields, got " + std::to_string(fields.size()),
                       number, 1);
    }
    double values[9];
    for (std::size_t i = 0; i < 9; ++i) {
      const auto v = ToDouble(fields[i]);
      if (!v) {
        throw ParseError("field is not a number", number,
                         FieldColumn(line, i));
      }
      values[i] = *v;
    }
    if (values[0] != static_cast<double>(file.encoding.size())) {
      throw ParseError("rows must be ordered by k", number, 1);
    }
    for (int i = 1; i <= 3; ++i) {
      max_coordinate = std::max(max_coordinate, std::abs(values[i]));
    }
    file.encoding.vectors.emplace_back(values[4], values[5], values[6]);
    file.encoding.magnitudes.push_back(values[7]);
    file.encoding.interior_mask.push_back(values[8] != 0.0);
  });
  if (!header_seen || file.encoding.size() == 0) {
    throw ParseError("encoding CSV has no rows");
  }
  const int n = static_cast<int>(std::lround(std::cbrt(
      static_cast<double>(file.encoding.size()))));
  file.points_per_axis =
      static_cast<std::size_t>(n) * n * n == file.encoding.size() ? n : 0;
  file.half_extent = max_coordinate;
  return file;
}

EncodingFile ParseEncoding(std::string_view text) {
  const std::string_view trimmed = Trim(text);
  if (!trimmed.empty() && trimmed.front() == '{') return ParseEncodingJson(text);
  return ParseEncodingCsv(text);
}

Json GroupToJson() {
  Json rotations = Json::array();
  for (const Eigen::Matrix3i& m : OctahedralGroup()) {
    const Eigen::Vector4d q = QuaternionFromRotation(m.cast<double>());
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r) {
      rows.push_back(Json::array({m(r, 0), m(r, 1), m(r, 2)}));
    }
    rotations.push_back(
        {{"q", Json::array({q[0], q[1], q[2], q[3]})}, {"matrix", rows}});
  }
  return Json{{"order", "lexicographic by row-major matrix entries"},
              {"rotations", rotations}};
}

std::string GroupToCsv() {
  std::string out = "w,x,y,z\n";
  for (const Eigen::Matrix3i& m : OctahedralGroup()) {
    const Eigen::Vector4d q = QuaternionFromRotation(m.cast<double>());
    for (int i = 0; i < 4; ++i) {
      out += FormatDouble(q[i]);
      out += i < 3 ? ',' : '\n';
    }
  }
  return out;
}

std::vector<TrajectoryStep> ParseTrajectoryCsv(std::string_view text) {
  constexpr std::size_t kColumns = 4 + kNumJoints;
  std::vector<TrajectoryStep> steps;
  bool first_line = true;
  ForEachCsvLine(text, [&](std::string_view line, int number) {
    const auto fields = SplitCommas(line);
    if (first_line) {
      first_line = false;
      if (!ToDouble(fields[0])) return;  // header
    }
    if (fields.size() != kColumns) {
      throw ParseError("expected " + std::to_string(kColumns) +
                           " fields (theta, x, y, z, q0..q11), got " +
                           std::to_string(fields.size()),
                       number, 1);
    }
    double values[kColumns];
    for (std::size_t i = 0; i < kColumns; ++i) {
      const auto v = ToDouble(fields[i]);
      if (!v) {
        throw ParseError("field is not a number", number,
                         FieldColumn(line, i));
      }
      values[i] = *v;
    }
    if (values[0] < 0.0 || values[0] > M_PI) {
      throw ParseError("theta must lie in [0, pi]", number, 1);
    }
    TrajectoryStep step;
    step.theta = values[0];
    step.position = Vec3(values[1], values[2], values[3]);
    for (int j = 0; j < kNumJoints; ++j) step.joints[j] = values[4 + j];
    steps.push_back(step);
  });
  if (steps.empty()) throw ParseError("trajectory is empty");
  for (TrajectoryStep& step : steps) {
    step.initial_position = steps.front().position;
    step.initial_joints = steps.front().joints;
  }
  return steps;
}

RewardParams RewardParamsFromJson(const Json& json) {
  if (!json.is_object()) throw ParseError("reward params must be an object");
  RewardParams params;
  for (auto& [key, field] :
       {std::pair{"lambda_theta", &params.lambda_theta},
        std::pair{"lambda_x", &params.lambda_x},
        std::pair{"lambda_q", &params.lambda_q},
        std::pair{"theta_clip", &params.theta_clip}}) {
    if (json.contains(key)) *field = NumberAt(json[key], key);
  }
  for (const auto& item : json.items()) {
    if (item.key() != "lambda_theta" && item.key() != "lambda_x" &&
        item.key() != "lambda_q" && item.key() != "theta_clip") {
      throw ParseError("unknown reward parameter '" + item.key() + "'");
    }
  }
  try {
    params.Validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return params;
}

std::string RewardRowsToCsv(std::span<const RewardRow> rows) {
  std::string out =
      "step,theta,position_drift,joint_deviation,rotation_term,"
      "position_term,joint_term,reward,cumulative_reward\n";
  for (const RewardRow& row : rows) {
    out += std::to_string(row.step);
    for (double v : {row.theta, row.position_drift, row.joint_deviation,
                     row.terms.rotation, row.terms.position, row.terms.joints,
                     row.terms.total, row.cumulative}) {
      out += ',';
      out += FormatDouble(v);
    }
    out += '\n';
  }
  return out;
}

void ApplyRecoveryJson(const Json& json, const TriangleMesh& mesh,
                       RecoveryConfig& config, TrialSettings& settings) {
  if (!json.is_object()) throw ParseError("recovery config must be an object");
  auto number = [&](const char* key, double& target) {
    if (json.contains(key)) target = NumberAt(json[key], key);
  };
  if (json.contains("max_iters")) {
    config.max_iters = static_cast<int>(NumberAt(json["max_iters"], "max_iters"));
  }
  number("translation_step", config.translation_step);
  number("rotation_step", config.rotation_step);
  number("backtrack_factor", config.backtrack_factor);
  number("dv_tolerance", config.dv_tolerance);
  number("step_tolerance", config.step_tolerance);
  if (json.contains("seed")) {
    if (!json["seed"].is_number_unsigned()) {
      throw ParseError("seed must be a nonnegative integer");
    }
    config.seed = json["seed"].get<std::uint64_t>();
  }
  if (json.contains("interior")) {
    if (!json["interior"].is_string()) throw ParseError("interior is a string");
    config.encode.interior =
        ParseInteriorPolicy(json["interior"].get<std::string>());
  }
  if (json.contains("symmetry")) {
    const Json& s = json["symmetry"];
    if (s == "identity") {
      config.symmetries = {Mat3::Identity()};
    } else if (s == "octahedral") {
      config.symmetries = ToDouble(OctahedralGroup());
    } else if (s == "auto") {
      config.symmetries = OctahedralSymmetriesOf(mesh);
    } else if (s.is_array()) {
      config.symmetries.clear();
      for (const Json& q : s) {
        config.symmetries.push_back(PoseFromJson(Json{{"q", q}}).rotation);
      }
    } else {
      throw ParseError(
          "symmetry must be identity, octahedral, auto or a quaternion list");
    }
  }
  double angle_deg = settings.max_angle * 180.0 / M_PI;
  number("perturb_angle_deg", angle_deg);
  settings.max_angle = angle_deg * M_PI / 180.0;
  number("perturb_offset", settings.max_offset);
  number("success_dv", settings.success_dv);
  number("success_angle", settings.success_angle);
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json RecoveryConfigToJson(const RecoveryConfig& config,
                          const TrialSettings& settings) {
  Json symmetries = Json::array();
  for (const Mat3& s : config.symmetries) {
    const Eigen::Vector4d q = QuaternionFromRotation(s);
    symmetries.push_back(Json::array({q[0], q[1], q[2], q[3]}));
  }
  return Json{{"max_iters", config.max_iters},
              {"translation_step", config.translation_step},
              {"rotation_step", config.rotation_step},
              {"backtrack_factor", config.backtrack_factor},
              {"dv_tolerance", config.dv_tolerance},
              {"step_tolerance", config.step_tolerance},
              {"seed", config.seed},
              {"interior", InteriorPolicyName(config.encode.interior)},
              {"symmetry", symmetries},
              {"trials", settings.trials},
              {"perturb_angle_deg", settings.max_angle * 180.0 / M_PI},
              {"perturb_offset", settings.max_offset},
              {"success_dv", settings.success_dv},
              {"success_angle", settings.success_angle}};
}

Json TrialBatchToJson(const TrialBatch& batch, const RecoveryConfig& config,
                      const TrialSettings& settings) {
  Json trials = Json::array();
  for (const TrialOutcome& o : batch.outcomes) {
    const RecoveryResult& r = o.result;
    Json trial{{"trial", o.trial},
               {"converged", r.converged},
               {"reason", r.reason},
               {"iterations", r.iterations},
               {"initial_dv", r.dv_trace.front()},
               {"final_dv", r.final_dv()},
               {"trace_length", r.dv_trace.size()},
               {"monotone", o.monotone},
               {"success", o.success},
               {"init_pose", PoseToJson(o.init)},
               {"final_pose", PoseToJson(r.pose)}};
    if (r.rotation_error) trial["rotation_error"] = *r.rotation_error;
    if (r.translation_error) trial["translation_error"] = *r.translation_error;
    trials.push_back(trial);
  }
  return Json{{"config", RecoveryConfigToJson(config, settings)},
              {"trials", trials},
              {"aggregate",
               {{"trials", batch.outcomes.size()},
                {"success_fraction", batch.success_fraction()},
                {"converged_fraction", batch.converged_fraction()},
                {"monotone_fraction", batch.monotone_fraction()},
                {"mean_iterations", batch.mean_iterations()}}}};
}

}  // namespace dynbps

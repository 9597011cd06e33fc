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

#ifndef DYNBPS_SERIALIZATION_H_
#define DYNBPS_SERIALIZATION_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dynbps/basis_points.h"
#include "dynbps/encoder.h"
#include "dynbps/gradients.h"
#include "dynbps/objectives.h"
#include "dynbps/pose_recovery.h"
#include "dynbps/rotations.h"

namespace dynbps {

using Json = nlohmann::json;

// Accepted deviation from orthonormality for rotations read from files.
inline constexpr double kInputRotationTolerance = 1e-6;

// A rotation that failed orthonormality validation on input.
class InvalidRotationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// {"t": [x, y, z], "q": [w, x, y, z]}
Json PoseToJson(const Pose& pose);

// Reads {"t": [...], "q": [w, x, y, z]} or {"t": [...], "R": [[...] x 3]}.
// "t" defaults to zero. Quaternions within kInputRotationTolerance of unit
// length are normalized; matrices within it are re-orthonormalized. Throws
// ParseError for malformed structure, InvalidRotationError otherwise.
Pose PoseFromJson(const Json& json);

// A --pose style argument: inline JSON, "w,x,y,z,tx,ty,tz", or a path to a
// JSON file.
Pose ParsePoseArgument(std::string_view text);

// ---------------------------------------------------------------------------
// Encodings.

std::string InteriorPolicyName(InteriorPolicy policy);
InteriorPolicy ParseInteriorPolicy(std::string_view name);

// {grid, poses, interior_policy, vectors, magnitudes, interior_mask
//  [, gradients]}.
Json EncodingToJson(const BasisPointSet& bps, const Pose& pose,
                    const BpsEncoding& encoding, InteriorPolicy policy,
                    const PoseJacobian* jacobian = nullptr);

// Header "k,px,py,pz,vx,vy,vz,mag,interior" and one row per basis point.
std::string EncodingToCsv(const BasisPointSet& bps,
                          const BpsEncoding& encoding);

// An encoding read back from disk. Grid metadata comes from the JSON "grid"
// object, or is inferred from the basis point columns of a CSV.
struct EncodingFile {
  int points_per_axis = 0;
  double half_extent = 0.0;
  std::optional<Pose> pose;
  BpsEncoding encoding;
};

EncodingFile ParseEncodingJson(std::string_view text);
EncodingFile ParseEncodingCsv(std::string_view text);
// Dispatches on the first non-blank character ('{' means JSON).
EncodingFile ParseEncoding(std::string_view text);

// ---------------------------------------------------------------------------
// Octahedral group.

// {"order": ..., "rotations": [{"q": [w, x, y, z], "matrix": [[...]]}, ...]}
Json GroupToJson();
// Header "w,x,y,z" and one quaternion per row.
std::string GroupToCsv();

// ---------------------------------------------------------------------------
// Reward evaluation.

// Rows of theta, x, y, z, q0..q11 with an optional header line. The first
// row supplies the initial position and joints. Throws ParseError with the
// line number of a malformed row, or for an empty trajectory.
std::vector<TrajectoryStep> ParseTrajectoryCsv(std::string_view text);

// Keys lambda_theta, lambda_x, lambda_q, theta_clip override the defaults.
RewardParams RewardParamsFromJson(const Json& json);

std::string RewardRowsToCsv(std::span<const RewardRow> rows);

// ---------------------------------------------------------------------------
// Pose recovery.

// Recognized keys: max_iters, translation_step, rotation_step,
// backtrack_factor, dv_tolerance, step_tolerance, seed, interior, and
// "symmetry": "identity" | "octahedral" | "auto" (the octahedral elements
// that map the mesh onto itself) or a list of quaternions. Trial keys:
// perturb_angle_deg, perturb_offset, success_dv, success_angle.
void ApplyRecoveryJson(const Json& json, const TriangleMesh& mesh,
                       RecoveryConfig& config, TrialSettings& settings);

Json RecoveryConfigToJson(const RecoveryConfig& config,
                          const TrialSettings& settings);
Json TrialBatchToJson(const TrialBatch& batch, const RecoveryConfig& config,
                      const TrialSettings& settings);

// Shortest text that round-trips exactly; negative zero prints as "0".
std::string FormatDouble(double value);

}  // namespace dynbps

#endif  // DYNBPS_SERIALIZATION_H_

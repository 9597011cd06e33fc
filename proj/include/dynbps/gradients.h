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

#ifndef DYNBPS_GRADIENTS_H_
#define DYNBPS_GRADIENTS_H_

#include <span>
#include <vector>

#include "dynbps/basis_points.h"
#include "dynbps/encoder.h"
#include "dynbps/indexed_mesh.h"
#include "dynbps/rotations.h"

namespace dynbps {

// Entries whose magnitude is below this are not differentiated.
inline constexpr double kMinDifferentiableMagnitude = 1e-9;

// Derivatives of each basis point magnitude |v_k| with respect to the object
// pose. Rotation derivatives use the world-frame left tangent of
// ApplyTangent: R <- exp([w]x) R.
struct PoseJacobian {
  std::vector<Vec3> d_translation;  // d|v_k|/dx, unitless
  std::vector<Vec3> d_rotation;     // d|v_k|/dw, meters per radian
  // False for interior points and for |v_k| < kMinDifferentiableMagnitude;
  // those rows are zero.
  std::vector<bool> valid;

  std::size_t size() const { return valid.size(); }
};

// Holding the closest point p*_k fixed (envelope theorem), with
// u_k = v_k / |v_k|:
//   d|v_k|/dx = u_k,   d|v_k|/dw = (p*_k - x) x u_k.
PoseJacobian GradMagnitudes(const BasisPointSet& bps, const Pose& pose,
                            const IndexedMesh& mesh,
                            const EncodeOptions& options = {},
                            int threads = 1);

struct BpsDistanceGradient {
  double value = 0.0;  // meters
  Vec3 d_translation = Vec3::Zero();
  Vec3 d_rotation = Vec3::Zero();
  // Entries with a valid Jacobian row.
  int valid_entries = 0;
};

// Mean absolute magnitude difference between `observed` and the encoding at
// `pose`, with its subgradient. sign(0) = 0 and invalid rows contribute
// nothing. Throws std::invalid_argument if observed.size() != bps.size().
BpsDistanceGradient GradBpsDistance(std::span<const double> observed,
                                    const BasisPointSet& bps, const Pose& pose,
                                    const IndexedMesh& mesh,
                                    const EncodeOptions& options = {},
                                    int threads = 1);

// ---------------------------------------------------------------------------
// Central finite-difference verification of GradMagnitudes.

struct GradientCheckOptions {
  double translation_step = 1e-6;  // meters
  double rotation_step = 1e-6;     // radians
  double tolerance = 1e-4;         // relative error bar
  // Lower bound on the denominator of the relative error of rotation blocks,
  // meters per radian. Translation blocks have unit norm.
  double rotation_scale_floor = 1e-3;
};

// One 3-vector block (translation or rotation) of one basis point.
struct GradientCheckEntry {
  int basis_point = 0;
  bool rotation = false;
  Vec3 analytic = Vec3::Zero();
  Vec3 numeric = Vec3::Zero();
  double relative_error = 0.0;
  // The closest feature or the interior flag differs between the base pose
  // and one of the perturbed poses of this block.
  bool transition = false;
  bool passed = false;
};

struct GradientCheckReport {
  std::vector<GradientCheckEntry> entries;  // valid blocks only

  int passed() const;
  // Failures that did not coincide with a detected transition.
  int unexplained_failures() const;
  double pass_fraction() const;
};

GradientCheckReport CheckGradients(const BasisPointSet& bps, const Pose& pose,
                                   const IndexedMesh& mesh,
                                   const GradientCheckOptions& check = {},
                                   const EncodeOptions& options = {});

}  // namespace dynbps

#endif  // DYNBPS_GRADIENTS_H_

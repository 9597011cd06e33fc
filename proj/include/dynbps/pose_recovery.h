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

#ifndef DYNBPS_POSE_RECOVERY_H_
#define DYNBPS_POSE_RECOVERY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynbps/basis_points.h"
#include "dynbps/encoder.h"
#include "dynbps/indexed_mesh.h"
#include "dynbps/rotations.h"

namespace dynbps {

struct RecoveryConfig {
  int max_iters = 500;
  double translation_step = 0.002;  // initial step, meters
  double rotation_step = 0.02;      // initial step, radians
  double backtrack_factor = 0.5;    // in (0, 1)
  double dv_tolerance = 1e-6;       // meters
  // Stop once the translation part of a full step would be shorter than
  // this (meters).
  double step_tolerance = 1e-10;
  std::uint64_t seed = 0;
  // Declared rotation symmetries of the mesh, used only to score the result
  // against a known pose. Empty means {identity}.
  std::vector<Mat3> symmetries;
  EncodeOptions encode;

  // Throws std::invalid_argument if a field is out of range.
  void Validate() const;
};

struct RecoveryResult {
  Pose pose;
  // d_v at the initial pose followed by one value per accepted step.
  std::vector<double> dv_trace;
  bool converged = false;
  int iterations = 0;
  std::string reason;
  // Symmetry-aware rotation error and position error, when a reference pose
  // was supplied.
  std::optional<double> rotation_error;
  std::optional<double> translation_error;

  double final_dv() const { return dv_trace.back(); }
};

// Subgradient descent on d_v over the pose tangent (dx, w), with the
// translation and rotation parts of the step scaled by the configured
// initial steps and a backtracking line search that accepts only strict
// decreases. The step length grows by 1 / backtrack_factor after every
// accepted step. Stops when d_v < dv_tolerance, when backtracking
// shrinks the step below step_tolerance (both count as converged), when no
// basis point has a usable gradient, or after max_iters.
RecoveryResult RecoverPose(std::span<const double> observed,
                           const BasisPointSet& bps, const IndexedMesh& mesh,
                           const Pose& init, const RecoveryConfig& config,
                           const Pose* reference = nullptr);

// Rotates by a uniformly random axis with angle uniform in [0, max_angle]
// and translates by a uniformly random direction with length uniform in
// [0, max_offset].
Pose PerturbPose(const Pose& pose, double max_angle, double max_offset,
                 Rng& rng);

struct TrialSettings {
  int trials = 200;
  double max_angle = 10.0 * 3.14159265358979323846 / 180.0;  // radians
  double max_offset = 0.005;                                 // meters
  // Ground-truth positions are drawn uniformly in a ball of this radius.
  double truth_offset = 0.005;
  // A trial succeeds when d_v and the symmetry-aware rotation error end
  // below these.
  double success_dv = 1e-5;
  double success_angle = 0.01;
  int threads = 1;
};

struct TrialOutcome {
  int trial = 0;
  Pose truth;
  Pose init;
  RecoveryResult result;
  bool monotone = true;
  bool success = false;
};

struct TrialBatch {
  std::vector<TrialOutcome> outcomes;

  double success_fraction() const;
  double converged_fraction() const;
  double monotone_fraction() const;
  double mean_iterations() const;
};

// Trials against a fixed observation: each starts from `init` perturbed with
// its own stream derived from config.seed. Trial 0 starts at `init` itself.
// Success is scored against `reference` when given, otherwise on d_v alone.
TrialBatch RunRecoveryTrials(std::span<const double> observed,
                             const BasisPointSet& bps, const IndexedMesh& mesh,
                             const Pose& init, const RecoveryConfig& config,
                             const TrialSettings& settings,
                             const Pose* reference = nullptr);

// Fully synthetic trials: each draws a Haar-uniform ground-truth rotation,
// encodes it, and recovers from a perturbed start.
TrialBatch RunSyntheticTrials(const BasisPointSet& bps,
                              const IndexedMesh& mesh,
                              const RecoveryConfig& config,
                              const TrialSettings& settings);

}  // namespace dynbps

#endif  // DYNBPS_POSE_RECOVERY_H_

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

#ifndef DYNBPS_OBJECTIVES_H_
#define DYNBPS_OBJECTIVES_H_

#include <array>
#include <span>
#include <vector>

#include "dynbps/basis_points.h"
#include "dynbps/encoder.h"
#include "dynbps/indexed_mesh.h"
#include "dynbps/rotations.h"

namespace dynbps {

// mean_k |a_k - b_k|, summed pairwise. Throws std::invalid_argument on a size
// mismatch; 0 for empty inputs.
double MeanAbsoluteDifference(std::span<const double> a,
                              std::span<const double> b);

// BPS distance d_v: mean absolute difference between `true_magnitudes` and
// the magnitudes of the encoding at `predicted` (meters). Zero at the
// generating pose and at every pose related to it by a symmetry of the mesh.
double BpsDistance(const Pose& predicted,
                   std::span<const double> true_magnitudes,
                   const BasisPointSet& bps, const IndexedMesh& mesh,
                   const EncodeOptions& options = {});

// ---------------------------------------------------------------------------
// Gaussian negative log-likelihood of estimator errors.

// Per-timestep distances and their predicted standard deviations. All four
// sequences have the same length. `horizon` is the normalizer T.
struct NllInputs {
  std::vector<double> bps_distances;       // d_v per step, meters
  std::vector<double> rotation_distances;  // d(R_hat, R) per step, radians
  std::vector<double> sigma_v;             // meters
  std::vector<double> sigma_r;             // radians
  int horizon = 1;
};

// Steps t = 0..T with horizon T = size - 1, so T + 1 terms are averaged with
// divisor T. Needs at least two steps.
NllInputs MakeNllInputs(std::vector<double> bps_distances,
                        std::vector<double> rotation_distances,
                        std::vector<double> sigma_v,
                        std::vector<double> sigma_r);

// log of the zero-mean normal pdf: -0.5 (d / sigma)^2 - ln sigma
// - 0.5 ln(2 pi).
double NormalLogPdf(double d, double sigma);

// -(1 / horizon) * sum_t [log N(d_v,t | sigma_v,t) + log N(d_R,t | sigma_R,t)]
// over every supplied step. Throws std::invalid_argument for a sigma <= 0,
// mismatched lengths, no steps, or horizon < 1.
double NllLoss(const NllInputs& inputs);

// ---------------------------------------------------------------------------
// Reorientation reward.

inline constexpr int kNumJoints = 12;
inline constexpr double kSuccessAngle = 0.4;  // radians

struct RewardParams {
  double lambda_theta = 1.0;
  double lambda_x = 8.0;
  double lambda_q = 1.0 / 6.0;
  double theta_clip = 0.1;  // radians

  // Throws std::invalid_argument for a negative or non-finite coefficient.
  void Validate() const;
};

using JointVector = std::array<double, kNumJoints>;

struct TrajectoryStep {
  double theta = 0.0;               // angle to goal, radians
  Vec3 position = Vec3::Zero();     // object position, meters
  JointVector joints{};             // radians
  Vec3 initial_position = Vec3::Zero();
  JointVector initial_joints{};
};

struct RewardTerms {
  double rotation = 0.0;  // lambda_theta * min(theta_prev - theta, clip)
  double position = 0.0;  // -lambda_x (|x_t - x_0| - |x_prev - x_0|)
  double joints = 0.0;    // -lambda_q * sum_j (q_j - q0_j)^4
  double total = 0.0;
};

// Only progress is clipped; moving away from the goal is penalized in full.
// Throws std::invalid_argument if the steps disagree on x_0 or q0.
RewardTerms RewardBreakdown(const TrajectoryStep& previous,
                            const TrajectoryStep& current,
                            const RewardParams& params = {});
double Reward(const TrajectoryStep& previous, const TrajectoryStep& current,
              const RewardParams& params = {});

// theta_T < 0.4 rad, strictly.
bool IsSuccess(double final_angle);

struct RewardRow {
  int step = 0;
  double theta = 0.0;
  double position_drift = 0.0;   // |x_t - x_0|
  double joint_deviation = 0.0;  // sum_j (q_j - q0_j)^4
  RewardTerms terms;
  double cumulative = 0.0;
};

// One row per transition t = 1..T. Needs at least two steps.
std::vector<RewardRow> EvaluateTrajectory(
    std::span<const TrajectoryStep> steps, const RewardParams& params = {});

}  // namespace dynbps

#endif  // DYNBPS_OBJECTIVES_H_

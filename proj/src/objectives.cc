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

#include "dynbps/objectives.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dynbps/parallel.h"

namespace dynbps {
namespace {

double JointDeviation(const TrajectoryStep& step) {
  double sum = 0.0;
  for (int j = 0; j < kNumJoints; ++j) {
    const double d = step.joints[j] - step.initial_joints[j];
    sum += (d * d) * (d * d);
  }
  return sum;
}

}  // namespace

double MeanAbsoluteDifference(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("magnitude sets differ in size: " +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  if (a.empty()) return 0.0;
  std::vector<double> diffs(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) diffs[k] = std::abs(a[k] - b[k]);
  return PairwiseSum(diffs) / static_cast<double>(a.size());
}

double BpsDistance(const Pose& predicted,
                   std::span<const double> true_magnitudes,
                   const BasisPointSet& bps, const IndexedMesh& mesh,
                   const EncodeOptions& options) {
  const BpsEncoding encoding = EncodeDynamic(bps, predicted, mesh, options);
  return MeanAbsoluteDifference(true_magnitudes, encoding.magnitudes);
}

NllInputs MakeNllInputs(std::vector<double> bps_distances,
                        std::vector<double> rotation_distances,
                        std::vector<double> sigma_v,
                        std::vector<double> sigma_r) {
  if (bps_distances.size() < 2) {
    throw std::invalid_argument("need steps t = 0..T with T >= 1");
  }
  NllInputs inputs;
  inputs.horizon = static_cast<int>(bps_distances.size()) - 1;
  inputs.bps_distances = std::move(bps_distances);
  inputs.rotation_distances = std::move(rotation_distances);
  inputs.sigma_v = std::move(sigma_v);
  inputs.sigma_r = std::move(sigma_r);
  return inputs;
}

double NormalLogPdf(double d, double sigma) {
  const double z = d / sigma;
  return -0.5 * z * z - std::log(sigma) -
         0.5 * std::log(2.0 * std::numbers::pi);
}

double NllLoss(const NllInputs& inputs) {
  const std::size_t n = inputs.bps_distances.size();
  if (n == 0) throw std::invalid_argument("NLL needs at least one step");
  if (inputs.rotation_distances.size() != n || inputs.sigma_v.size() != n ||
      inputs.sigma_r.size() != n) {
    throw std::invalid_argument("NLL input sequences differ in length");
  }
  if (inputs.horizon < 1) throw std::invalid_argument("NLL horizon must be >= 1");
  std::vector<double> terms(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double sv = inputs.sigma_v[t];
    const double sr = inputs.sigma_r[t];
    if (!(sv > 0.0) || !(sr > 0.0) || !std::isfinite(sv) ||
        !std::isfinite(sr)) {
      throw std::invalid_argument("sigma must be positive at step " +
                                  std::to_string(t));
    }
    terms[t] = NormalLogPdf(inputs.bps_distances[t], sv) +
               NormalLogPdf(inputs.rotation_distances[t], sr);
  }
  return -PairwiseSum(terms) / inputs.horizon;
}

void RewardParams::Validate() const {
  for (double v : {lambda_theta, lambda_x, lambda_q, theta_clip}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(
          "reward coefficients must be finite and nonnegative");
    }
  }
}

RewardTerms RewardBreakdown(const TrajectoryStep& previous,
                            const TrajectoryStep& current,
                            const RewardParams& params) {
  if (previous.initial_position != current.initial_position ||
      previous.initial_joints != current.initial_joints) {
    throw std::invalid_argument("steps use different initial references");
  }
  RewardTerms terms;
  terms.rotation = params.lambda_theta *
                   std::min(previous.theta - current.theta, params.theta_clip);
  terms.position =
      -params.lambda_x * ((current.position - current.initial_position).norm() -
                          (previous.position - previous.initial_position).norm());
  terms.joints = -params.lambda_q * JointDeviation(current);
  terms.total = terms.rotation + terms.position + terms.joints;
  return terms;
}

double Reward(const TrajectoryStep& previous, const TrajectoryStep& current,
              const RewardParams& params) {
  return RewardBreakdown(previous, current, params).total;
}

bool IsSuccess(double final_angle) { return final_angle < kSuccessAngle; }

std::vector<RewardRow> EvaluateTrajectory(
    std::span<const TrajectoryStep> steps, const RewardParams& params) {
  if (steps.size() < 2) {
    throw std::invalid_argument("trajectory needs at least 2 steps, got " +
                                std::to_string(steps.size()));
  }
  params.Validate();
  std::vector<RewardRow> rows;
  rows.reserve(steps.size() - 1);
  double cumulative = 0.0;
  for (std::size_t t = 1; t < steps.size(); ++t) {
    RewardRow row;
    row.step = static_cast<int>(t);
    row.theta = steps[t].theta;
    row.position_drift =
        (steps[t].position - steps[t].initial_position).norm();
    row.joint_deviation = JointDeviation(steps[t]);
    row.terms = RewardBreakdown(steps[t - 1], steps[t], params);
    cumulative += row.terms.total;
    row.cumulative = cumulative;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dynbps

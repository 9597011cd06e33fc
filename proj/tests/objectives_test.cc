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

#include <cmath>
#include <numbers>
#include <random>

#include "dynbps/basis_points.h"
#include "dynbps/objectives.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace dynbps {
namespace {

TEST(BpsDistanceTest, ZeroAtMatchingPose) {
  Rng rng(1);
  const IndexedMesh mesh(MakeLShape(0.03));
  const BasisPointSet bps = MakeGrid();
  const Pose pose = testing::RandomPose(0.02, rng);
  const BpsEncoding e = EncodeDynamic(bps, pose, mesh);
  EXPECT_EQ(BpsDistance(pose, e.magnitudes, bps, mesh), 0.0);
}

TEST(BpsDistanceTest, CubeSymmetriesGiveZero) {
  const IndexedMesh cube(MakeBox(Vec3::Constant(0.05)));
  const BasisPointSet bps = MakeGrid();
  const BpsEncoding e = EncodeStatic(bps, cube);
  for (const Eigen::Matrix3i& s : OctahedralGroup()) {
    Pose pose;
    pose.rotation = s.cast<double>();
    EXPECT_LT(BpsDistance(pose, e.magnitudes, bps, cube), 1e-12);
  }
}

TEST(BpsDistanceTest, TranslationMatchesTransformedMeshOracle) {
  const TriangleMesh big = MakeBox(Vec3::Constant(0.2));
  const IndexedMesh mesh(MakeBox(Vec3::Constant(0.2)));
  const BasisPointSet bps = MakeGrid(4, 0.3);
  const BpsEncoding base = EncodeStatic(bps, big);
  const BpsEncoding moved =
      EncodeStatic(bps, TransformMesh(big, Mat3::Identity(), Vec3(0.01, 0, 0)));
  double sum = 0.0;
  for (std::size_t k = 0; k < bps.size(); ++k) {
    sum += std::abs(moved.magnitudes[k] - base.magnitudes[k]);
  }
  Pose shifted;
  shifted.position = Vec3(0.01, 0, 0);
  EXPECT_NEAR(BpsDistance(shifted, base.magnitudes, bps, mesh),
              sum / bps.size(), 1e-15);
}

TEST(MeanAbsoluteDifferenceTest, Basics) {
  EXPECT_EQ(MeanAbsoluteDifference(std::vector<double>{1, 2, 3},
                                   std::vector<double>{1, 0, 6}),
            5.0 / 3.0);
  EXPECT_THROW(MeanAbsoluteDifference(std::vector<double>{1},
                                      std::vector<double>{1, 2}),
               std::invalid_argument);
}

TEST(NllLossTest, SingleStandardTerm) {
  NllInputs inputs;
  inputs.bps_distances = {0.0};
  inputs.rotation_distances = {0.0};
  inputs.sigma_v = {1.0};
  inputs.sigma_r = {1.0};
  EXPECT_NEAR(NllLoss(inputs), 1.8378770664, 1e-9);
  EXPECT_NEAR(NllLoss(inputs), std::log(2.0 * std::numbers::pi), 1e-15);
}

long double OracleNll(const NllInputs& in) {
  long double sum = 0.0L;
  const long double log_2pi = std::log(2.0L * std::numbers::pi_v<long double>);
  for (std::size_t t = 0; t < in.bps_distances.size(); ++t) {
    for (auto [d, s] : {std::pair{in.bps_distances[t], in.sigma_v[t]},
                        std::pair{in.rotation_distances[t], in.sigma_r[t]}}) {
      const long double z = static_cast<long double>(d) / s;
      sum += -0.5L * z * z - std::log(static_cast<long double>(s)) -
             0.5L * log_2pi;
    }
  }
  return -sum / in.horizon;
}

TEST(NllLossTest, MatchesExtendedPrecisionOracle) {
  Rng rng(2);
  std::uniform_real_distribution<double> d(0.0, 0.05);
  std::uniform_real_distribution<double> r(0.0, 3.0);
  std::uniform_real_distribution<double> s(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int steps = 2 + trial % 50;
    std::vector<double> dv, dr, sv, sr;
    for (int t = 0; t < steps; ++t) {
      dv.push_back(d(rng));
      dr.push_back(r(rng));
      sv.push_back(s(rng));
      sr.push_back(s(rng));
    }
    const NllInputs in = MakeNllInputs(dv, dr, sv, sr);
    EXPECT_EQ(in.horizon, steps - 1);
    const double value = NllLoss(in);
    EXPECT_NEAR(value, static_cast<double>(OracleNll(in)),
                1e-12 * std::max(1.0, std::abs(value)));
  }
}

TEST(NllLossTest, LargerErrorsPreferLargerSigma) {
  // With d > sigma, the loss decreases as sigma grows toward d.
  NllInputs in = MakeNllInputs({0.5, 0.5}, {0.0, 0.0}, {0.1, 0.1}, {1, 1});
  const double tight = NllLoss(in);
  in.sigma_v = {0.3, 0.3};
  EXPECT_LT(NllLoss(in), tight);
}

TEST(NllLossTest, RejectsBadInputs) {
  EXPECT_THROW(MakeNllInputs({0.0}, {0.0}, {1.0}, {1.0}), std::invalid_argument);
  NllInputs in = MakeNllInputs({0, 0}, {0, 0}, {1, 0}, {1, 1});
  EXPECT_THROW(NllLoss(in), std::invalid_argument);
  in.sigma_v = {1, 1};
  in.rotation_distances = {0};
  EXPECT_THROW(NllLoss(in), std::invalid_argument);
}

TrajectoryStep Step(double theta) {
  TrajectoryStep s;
  s.theta = theta;
  return s;
}

TEST(RewardTest, ClippedProgress) {
  EXPECT_NEAR(Reward(Step(0.5), Step(0.3), {}), 0.1, 1e-12);
}

TEST(RewardTest, RegressionIsNotClipped) {
  EXPECT_NEAR(Reward(Step(0.3), Step(0.5), {}), -0.2, 1e-12);
}

TEST(RewardTest, PositionAndJointPenalties) {
  TrajectoryStep prev = Step(0.3);
  TrajectoryStep cur = Step(0.3);
  cur.position = Vec3(0.01, 0, 0);
  cur.joints.fill(0.1);
  const RewardTerms terms = RewardBreakdown(prev, cur, {});
  EXPECT_NEAR(terms.total, -0.0802, 1e-12);
  EXPECT_NEAR(terms.position, -0.08, 1e-15);
  EXPECT_NEAR(terms.joints, -0.0002, 1e-15);
  EXPECT_EQ(terms.rotation, 0.0);
}

TEST(RewardTest, MismatchedReferencesThrow) {
  TrajectoryStep prev = Step(0.3);
  TrajectoryStep cur = Step(0.3);
  cur.initial_position = Vec3(1, 0, 0);
  EXPECT_THROW(Reward(prev, cur, {}), std::invalid_argument);
}

TEST(RewardTest, RotationRewardIsBoundedPerStep) {
  Rng rng(3);
  std::uniform_real_distribution<double> theta(0.0, std::numbers::pi);
  const RewardParams params;
  std::vector<TrajectoryStep> steps;
  for (int t = 0; t < 500; ++t) steps.push_back(Step(theta(rng)));
  const auto rows = EvaluateTrajectory(steps, params);
  ASSERT_EQ(rows.size(), steps.size() - 1);
  double rotation_total = 0.0;
  for (const RewardRow& row : rows) {
    EXPECT_LE(row.terms.rotation, params.lambda_theta * params.theta_clip);
    rotation_total += row.terms.rotation;
  }
  EXPECT_LE(rotation_total,
            params.lambda_theta * params.theta_clip * rows.size() + 1e-12);
  EXPECT_NEAR(rows.back().cumulative, rotation_total, 1e-9);
}

TEST(RewardTest, ParamsValidation) {
  RewardParams params;
  params.lambda_x = -1.0;
  EXPECT_THROW(params.Validate(), std::invalid_argument);
  EXPECT_THROW(EvaluateTrajectory(std::vector<TrajectoryStep>{Step(0.1)}, {}),
               std::invalid_argument);
}

TEST(SuccessTest, StrictThreshold) {
  EXPECT_TRUE(IsSuccess(0.39));
  EXPECT_FALSE(IsSuccess(0.4));
  EXPECT_TRUE(IsSuccess(0.0));
  EXPECT_TRUE(IsSuccess(std::nextafter(0.4, 0.0)));
}

}  // namespace
}  // namespace dynbps

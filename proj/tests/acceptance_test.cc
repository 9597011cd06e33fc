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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dynbps/basis_points.h"
#include "dynbps/bench.h"
#include "dynbps/bvh.h"
#include "dynbps/encoder.h"
#include "dynbps/gradients.h"
#include "dynbps/objectives.h"
#include "dynbps/pose_recovery.h"
#include "dynbps/rotations.h"
#include "test_support.h"

namespace dynbps {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), fmt, args...);
  return buffer;
}

const Vec3 kCubeHalf = Vec3::Constant(0.05);
// A 5 x 5 x 8 cm cuboid.
const Vec3 kCuboidHalf(0.025, 0.025, 0.04);

Outcome ClosestPointOracle() {
  Rng rng(101);
  int agree = 0;
  int total = 0;
  double worst = 0.0;
  for (const TriangleMesh& mesh : testing::MeshZoo(101)) {
    const Bvh bvh = BuildBvh(mesh);
    for (int i = 0; i < 1000; ++i) {
      const Vec3 p = testing::UniformInCube(0.12, rng);
      const double err = std::abs(ClosestPointOnMesh(bvh, mesh, p).distance -
                                  ClosestPointBruteForce(mesh, p).distance);
      worst = std::max(worst, err);
      agree += err <= 1e-9;
      ++total;
    }
  }
  return {agree == total,
          Format("%d/%d queries on 10 meshes agree within 1e-9 m (max diff %.3g)",
                 agree, total, worst)};
}

Outcome PullBack() {
  Rng rng(102);
  const auto zoo = testing::MeshZoo(102);
  const BasisPointSet bps = MakeGrid();
  int agree = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TriangleMesh& mesh = zoo[trial % zoo.size()];
    const Pose pose = testing::RandomPose(0.02, rng);
    const BpsEncoding dynamic = EncodeDynamic(bps, pose, IndexedMesh(mesh));
    const BpsEncoding moved = EncodeStatic(
        bps, TransformMesh(mesh, pose.rotation, pose.position));
    double diff = 0.0;
    for (std::size_t k = 0; k < bps.size(); ++k) {
      diff = std::max(diff,
                      (dynamic.vectors[k] - moved.vectors[k]).cwiseAbs().maxCoeff());
    }
    worst = std::max(worst, diff);
    agree += diff <= 1e-9;
  }
  return {agree == 100,
          Format("%d/100 (pose, mesh) pairs match the transformed mesh within "
                 "1e-9 m (max diff %.3g)",
                 agree, worst)};
}

Outcome InteriorRule() {
  Rng rng(103);
  const IndexedMesh cube(MakeBox(kCubeHalf));
  const BasisPointSet bps = MakeGrid();
  int inside = 0;
  int exact = 0;
  for (int trial = 0; trial <= 20; ++trial) {
    const Pose pose =
        trial == 0 ? Pose::Identity() : testing::RandomPose(0.02, rng);
    const BpsEncoding e = EncodeDynamic(bps, pose, cube);
    for (std::size_t k = 0; k < bps.size(); ++k) {
      const Vec3 local =
          pose.rotation.transpose() * (bps.points[k] - pose.position);
      if (local.cwiseAbs().maxCoeff() >= 0.05 - 1e-9) continue;
      ++inside;
      exact += e.vectors[k] == Vec3::Zero() && e.magnitudes[k] == 0.0 &&
               e.interior_mask[k];
    }
  }
  return {inside > 0 && exact == inside,
          Format("%d/%d strictly interior grid points over 21 cube poses are "
                 "exactly zero",
                 exact, inside)};
}

Outcome GridConstant() {
  const BasisPointSet bps = MakeGrid();
  Vec3 lo = Vec3::Constant(1e9);
  Vec3 hi = Vec3::Constant(-1e9);
  for (const Vec3& p : bps.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const bool pass = bps.size() == 64 && lo == Vec3::Constant(-0.07) &&
                    hi == Vec3::Constant(0.07);
  return {pass, Format("%zu points spanning [%g, %g]^3 m", bps.size(),
                       lo.minCoeff(), hi.maxCoeff())};
}

Outcome GradientCheck() {
  Rng rng(105);
  const auto zoo = testing::MeshZoo(105);
  const BasisPointSet bps = MakeGrid();
  int passed = 0;
  int total = 0;
  int unexplained = 0;
  int transitions = 0;
  for (int sample = 0; sample < 50; ++sample) {
    const IndexedMesh mesh(zoo[sample % zoo.size()]);
    const GradientCheckReport report =
        CheckGradients(bps, testing::RandomPose(0.02, rng), mesh);
    passed += report.passed();
    total += static_cast<int>(report.entries.size());
    unexplained += report.unexplained_failures();
    for (const auto& entry : report.entries) transitions += entry.transition;
  }
  const double fraction = static_cast<double>(passed) / total;
  return {fraction >= 0.95 && unexplained == 0,
          Format("%.4f of %d gradient blocks within 1e-4 over 50 samples; %d "
                 "failures away from a detected transition (%d transitions)",
                 fraction, total, unexplained, transitions)};
}

Outcome SymmetryInvariance() {
  const BasisPointSet bps = MakeGrid();
  const IndexedMesh cube(MakeBox(kCubeHalf));
  const IndexedMesh cuboid(MakeBox(kCuboidHalf));
  const BpsEncoding cube_ref = EncodeStatic(bps, cube);
  const BpsEncoding cuboid_ref = EncodeStatic(bps, cuboid);
  double cube_worst = 0.0;
  double sym_worst = 0.0;
  double other_min = 1e9;
  int sym_count = 0;
  for (const Eigen::Matrix3i& s : OctahedralGroup()) {
    Pose pose;
    pose.rotation = s.cast<double>();
    cube_worst = std::max(cube_worst,
                          BpsDistance(pose, cube_ref.magnitudes, bps, cube));
    const double d = BpsDistance(pose, cuboid_ref.magnitudes, bps, cuboid);
    // The long axis is z: symmetries keep it on the z axis.
    if (std::abs(s(2, 2)) == 1) {
      ++sym_count;
      sym_worst = std::max(sym_worst, d);
    } else {
      other_min = std::min(other_min, d);
    }
  }
  const bool pass = cube_worst < 1e-9 && sym_count == 8 && sym_worst < 1e-9 &&
                    other_min > 1e-4;
  return {pass, Format("cube max d_v %.3g over 24; cuboid max %.3g over its %d "
                       "symmetries, min %.3g over the other %d",
                       cube_worst, sym_worst, sym_count, other_min, 24 - sym_count)};
}

Outcome GroupAxioms() {
  const auto group = OctahedralGroup();
  auto contains = [&](const Eigen::Matrix3i& m) {
    return std::find(group.begin(), group.end(), m) != group.end();
  };
  int closed = 0;
  int inverses = 0;
  for (const auto& a : group) {
    inverses += contains(a.transpose()) &&
                a * a.transpose() == Eigen::Matrix3i::Identity();
    for (const auto& b : group) closed += contains(a * b);
  }
  const bool identity = contains(Eigen::Matrix3i::Identity());
  const bool pass = group.size() == 24 && closed == 576 && inverses == 24 &&
                    identity;
  return {pass, Format("%zu elements, %d/576 products closed, %d/24 inverses, "
                       "identity %s",
                       group.size(), closed, inverses, identity ? "present" : "missing")};
}

Outcome RewardValues() {
  auto step = [](double theta) {
    TrajectoryStep s;
    s.theta = theta;
    return s;
  };
  const RewardParams params;
  const double r1 = Reward(step(0.5), step(0.3), params);
  const double r2 = Reward(step(0.3), step(0.5), params);
  TrajectoryStep moved = step(0.3);
  moved.position = Vec3(0.01, 0, 0);
  moved.joints.fill(0.1);
  const double r3 = Reward(step(0.3), moved, params);
  const bool values = std::abs(r1 - 0.1) <= 1e-12 &&
                      std::abs(r2 + 0.2) <= 1e-12 &&
                      std::abs(r3 + 0.0802) <= 1e-12;
  const bool success = IsSuccess(0.39) && !IsSuccess(0.4) && IsSuccess(0.0) &&
                       IsSuccess(std::nextafter(0.4, 0.0));
  return {values && success,
          Format("rewards %.15g, %.15g, %.15g; success(0.4)=%s, success(0.39)=%s",
                 r1, r2, r3, IsSuccess(0.4) ? "true" : "false",
                 IsSuccess(0.39) ? "true" : "false")};
}

Outcome NllConstant() {
  NllInputs inputs;
  inputs.bps_distances = {0.0};
  inputs.rotation_distances = {0.0};
  inputs.sigma_v = {1.0};
  inputs.sigma_r = {1.0};
  const double value = NllLoss(inputs);
  return {std::abs(value - 1.8378770664) <= 1e-9,
          Format("L = %.12f", value)};
}

Outcome RecoveryStatistics() {
  const TriangleMesh cuboid = MakeBox(kCuboidHalf);
  const IndexedMesh mesh(cuboid);
  RecoveryConfig config;
  config.seed = 110;
  config.symmetries = OctahedralSymmetriesOf(cuboid);
  TrialSettings settings;
  settings.trials = 200;
  settings.max_angle = 10.0 * std::numbers::pi / 180.0;
  settings.max_offset = 0.005;
  settings.success_dv = 1e-5;
  settings.success_angle = 0.01;
  const TrialBatch batch = RunSyntheticTrials(MakeGrid(), mesh, config, settings);
  const double success = batch.success_fraction();
  const double monotone = batch.monotone_fraction();
  return {success >= 0.9 && monotone == 1.0,
          Format("success %.3f, monotone %.3f over %zu trials (%zu symmetries, "
                 "mean %.1f iterations)",
                 success, monotone, batch.outcomes.size(),
                 config.symmetries.size(), batch.mean_iterations())};
}

Outcome PerformanceFloor() {
  const IndexedMesh sphere(MakeUvSphere(0.05, 100, 51));
  BenchOptions options;
  options.poses = 100;
  options.threads = 8;
  options.seed = 111;
  const BenchReport report = RunBench(MakeGrid(), sphere, "uv_sphere", options);
  const bool pass = report.triangles >= 10000 && report.speedup >= 10.0 &&
                    report.checksums_match;
  return {pass,
          Format("%zu triangles, %zu queries: brute %.3f s, BVH %.3f s, speedup "
                 "%.1fx; 8-thread checksums %s",
                 report.triangles, report.queries, report.runs[0].seconds,
                 report.runs[2].seconds, report.speedup,
                 report.checksums_match ? "identical" : "DIFFER")};
}

Outcome HaarSampling() {
  constexpr int kSamples = 100000;
  Rng rng(112);
  std::vector<double> angles(kSamples);
  for (double& a : angles) {
    a = GeodesicDistance(Mat3::Identity(), SampleUniformRotation(rng));
  }
  std::sort(angles.begin(), angles.end());
  double d = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double cdf = (angles[i] - std::sin(angles[i])) / std::numbers::pi;
    d = std::max({d, cdf - static_cast<double>(i) / kSamples,
                  static_cast<double>(i + 1) / kSamples - cdf});
  }
  const double critical = 1.6276 / std::sqrt(static_cast<double>(kSamples));
  return {d < critical,
          Format("KS statistic %.5f vs 1%% critical value %.5f", d, critical)};
}

struct Criterion {
  const char* name;
  double time_limit;  // seconds; 0 means none
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace dynbps

int main() {
  using namespace dynbps;
  const std::vector<Criterion> criteria{
      {"closest-point oracle equivalence", 60, ClosestPointOracle},
      {"pull-back correctness", 0, PullBack},
      {"interior rule", 0, InteriorRule},
      {"grid constant", 0, GridConstant},
      {"gradient check", 300, GradientCheck},
      {"symmetry invariance of d_v", 0, SymmetryInvariance},
      {"octahedral group", 0, GroupAxioms},
      {"reward spot values", 0, RewardValues},
      {"NLL constant", 0, NllConstant},
      {"pose recovery statistics", 600, RecoveryStatistics},
      {"performance floor", 300, PerformanceFloor},
      {"Haar sampling", 0, HaarSampling},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = c.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::string timing = Format("%.2f s", seconds);
    if (c.time_limit > 0) {
      timing += Format(" of %.0f s allowed", c.time_limit);
      if (seconds >= c.time_limit) outcome.pass = false;
    }
    failures += !outcome.pass;
    std::printf("%s  %2zu  %s: %s [%s]\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                c.name, outcome.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

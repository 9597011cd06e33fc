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

#include "dynbps/pose_recovery.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dynbps/gradients.h"
#include "dynbps/parallel.h"

namespace dynbps {
namespace {

Vec3 RandomUnitVector(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec3 v;
  do {
    for (int i = 0; i < 3; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

// Independent, reproducible stream per trial.
Rng TrialRng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return Rng(seq);
}

bool NonIncreasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1]) return false;
  }
  return true;
}

void Score(RecoveryResult& result, const Pose& reference,
           const RecoveryConfig& config) {
  result.rotation_error = SymmetryAwareAngle(
      result.pose.rotation, reference.rotation, config.symmetries);
  result.translation_error = (result.pose.position - reference.position).norm();
}

bool Succeeded(const RecoveryResult& result, const TrialSettings& settings) {
  if (result.final_dv() >= settings.success_dv) return false;
  return !result.rotation_error || *result.rotation_error < settings.success_angle;
}

}  // namespace

void RecoveryConfig::Validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(translation_step > 0.0) || !(rotation_step > 0.0)) {
    throw std::invalid_argument("initial steps must be positive");
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw std::invalid_argument("backtrack factor must lie in (0, 1)");
  }
  if (!(dv_tolerance >= 0.0) || !(step_tolerance >= 0.0)) {
    throw std::invalid_argument("tolerances must be nonnegative");
  }
}

RecoveryResult RecoverPose(std::span<const double> observed,
                           const BasisPointSet& bps, const IndexedMesh& mesh,
                           const Pose& init, const RecoveryConfig& config,
                           const Pose* reference) {
  config.Validate();
  RecoveryResult result;
  result.pose = init;
  BpsDistanceGradient current =
      GradBpsDistance(observed, bps, init, mesh, config.encode);
  result.dv_trace.push_back(current.value);

  // Fraction of the configured initial step.
  double scale = 1.0;
  while (true) {
    if (current.value < config.dv_tolerance) {
      result.converged = true;
      result.reason = "d_v below tolerance";
      break;
    }
    if (result.iterations >= config.max_iters) {
      result.reason = "iteration limit reached";
      break;
    }
    // Gradient in units of the initial steps.
    const Vec3 gx = config.translation_step * current.d_translation;
    const Vec3 gw = config.rotation_step * current.d_rotation;
    const double gnorm = std::sqrt(gx.squaredNorm() + gw.squaredNorm());
    if (current.valid_entries == 0 || gnorm == 0.0) {
      result.reason = "no descent direction";
      break;
    }
    const Vec3 dir_x = -config.translation_step * gx / gnorm;
    const Vec3 dir_w = -config.rotation_step * gw / gnorm;

    bool accepted = false;
    while (scale * config.translation_step >= config.step_tolerance) {
      const Pose candidate =
          ApplyTangent(result.pose, scale * dir_x, scale * dir_w);
      BpsDistanceGradient next =
          GradBpsDistance(observed, bps, candidate, mesh, config.encode);
      if (next.value < current.value) {
        result.pose = candidate;
        current = next;
        accepted = true;
        break;
      }
      scale *= config.backtrack_factor;
    }
    if (!accepted) {
      result.converged = true;
      result.reason = "step below tolerance";
      break;
    }
    ++result.iterations;
    result.dv_trace.push_back(current.value);
    scale = std::min(1.0, scale / config.backtrack_factor);
  }

  if (reference != nullptr) Score(result, *reference, config);
  return result;
}

Pose PerturbPose(const Pose& pose, double max_angle, double max_offset,
                 Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec3 axis = RandomUnitVector(rng);
  const double angle = max_angle * unit(rng);
  const Vec3 direction = RandomUnitVector(rng);
  const double offset = max_offset * unit(rng);
  return ApplyTangent(pose, offset * direction, angle * axis);
}

double TrialBatch::success_fraction() const {
  if (outcomes.empty()) return 0.0;
  return static_cast<double>(std::count_if(
             outcomes.begin(), outcomes.end(),
             [](const TrialOutcome& o) { return o.success; })) /
         outcomes.size();
}

double TrialBatch::converged_fraction() const {
  if (outcomes.empty()) return 0.0;
  return static_cast<double>(std::count_if(
             outcomes.begin(), outcomes.end(),
             [](const TrialOutcome& o) { return o.result.converged; })) /
         outcomes.size();
}

double TrialBatch::monotone_fraction() const {
  if (outcomes.empty()) return 0.0;
  return static_cast<double>(std::count_if(
             outcomes.begin(), outcomes.end(),
             [](const TrialOutcome& o) { return o.monotone; })) /
         outcomes.size();
}

double TrialBatch::mean_iterations() const {
  if (outcomes.empty()) return 0.0;
  double sum = 0.0;
  for (const TrialOutcome& o : outcomes) sum += o.result.iterations;
  return sum / outcomes.size();
}

TrialBatch RunRecoveryTrials(std::span<const double> observed,
                             const BasisPointSet& bps, const IndexedMesh& mesh,
                             const Pose& init, const RecoveryConfig& config,
                             const TrialSettings& settings,
                             const Pose* reference) {
  config.Validate();
  TrialBatch batch;
  batch.outcomes.resize(std::max(settings.trials, 0));
  ParallelFor(
      batch.outcomes.size(), settings.threads,
      [&](std::size_t i) {
        TrialOutcome& outcome = batch.outcomes[i];
        outcome.trial = static_cast<int>(i);
        Rng rng = TrialRng(config.seed, outcome.trial);
        outcome.init = i == 0 ? init
                              : PerturbPose(init, settings.max_angle,
                                            settings.max_offset, rng);
        if (reference != nullptr) outcome.truth = *reference;
        outcome.result = RecoverPose(observed, bps, mesh, outcome.init, config,
                                     reference);
        outcome.monotone = NonIncreasing(outcome.result.dv_trace);
        outcome.success = Succeeded(outcome.result, settings);
      },
      1);
  return batch;
}

TrialBatch RunSyntheticTrials(const BasisPointSet& bps,
                              const IndexedMesh& mesh,
                              const RecoveryConfig& config,
                              const TrialSettings& settings) {
  config.Validate();
  TrialBatch batch;
  batch.outcomes.resize(std::max(settings.trials, 0));
  ParallelFor(
      batch.outcomes.size(), settings.threads,
      [&](std::size_t i) {
        TrialOutcome& outcome = batch.outcomes[i];
        outcome.trial = static_cast<int>(i);
        Rng rng = TrialRng(config.seed, outcome.trial);
        outcome.truth.rotation = SampleUniformRotation(rng);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        outcome.truth.position =
            settings.truth_offset * unit(rng) * RandomUnitVector(rng);
        outcome.init = PerturbPose(outcome.truth, settings.max_angle,
                                   settings.max_offset, rng);
        const BpsEncoding observed =
            EncodeDynamic(bps, outcome.truth, mesh, config.encode);
        outcome.result = RecoverPose(observed.magnitudes, bps, mesh,
                                     outcome.init, config, &outcome.truth);
        outcome.monotone = NonIncreasing(outcome.result.dv_trace);
        outcome.success = Succeeded(outcome.result, settings);
      },
      1);
  return batch;
}

}  // namespace dynbps

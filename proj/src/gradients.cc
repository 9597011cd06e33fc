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

#include "dynbps/gradients.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dynbps/errors.h"
#include "dynbps/objectives.h"
#include "dynbps/parallel.h"

namespace dynbps {
namespace {

struct JacobianRow {
  Vec3 d_translation = Vec3::Zero();
  Vec3 d_rotation = Vec3::Zero();
  bool valid = false;
};

JacobianRow RowFromQuery(const BasisPointQuery& q, const Pose& pose) {
  JacobianRow row;
  if (q.interior || q.magnitude < kMinDifferentiableMagnitude) return row;
  const Vec3 unit = q.vector / q.magnitude;
  row.d_translation = unit;
  row.d_rotation = (q.world_closest - pose.position).cross(unit);
  row.valid = true;
  return row;
}

std::vector<BasisPointQuery> QueryAll(const BasisPointSet& bps,
                                      const Pose& pose,
                                      const IndexedMesh& mesh,
                                      const EncodeOptions& options,
                                      int threads) {
  std::vector<BasisPointQuery> queries(bps.size());
  ParallelFor(bps.size(), threads, [&](std::size_t k) {
    queries[k] = QueryBasisPoint(bps.points[k], pose, mesh, options);
  });
  return queries;
}

void CheckEncodable(const IndexedMesh& mesh, const EncodeOptions& options) {
  if (options.interior == InteriorPolicy::kZero && !mesh.watertight()) {
    throw ContainmentUnavailableError(
        "interior zeroing needs a watertight mesh");
  }
}

}  // namespace

PoseJacobian GradMagnitudes(const BasisPointSet& bps, const Pose& pose,
                            const IndexedMesh& mesh,
                            const EncodeOptions& options, int threads) {
  CheckEncodable(mesh, options);
  const std::vector<BasisPointQuery> queries =
      QueryAll(bps, pose, mesh, options, threads);
  PoseJacobian jacobian;
  jacobian.d_translation.reserve(queries.size());
  jacobian.d_rotation.reserve(queries.size());
  jacobian.valid.reserve(queries.size());
  for (const BasisPointQuery& q : queries) {
    const JacobianRow row = RowFromQuery(q, pose);
    jacobian.d_translation.push_back(row.d_translation);
    jacobian.d_rotation.push_back(row.d_rotation);
    jacobian.valid.push_back(row.valid);
  }
  return jacobian;
}

BpsDistanceGradient GradBpsDistance(std::span<const double> observed,
                                    const BasisPointSet& bps, const Pose& pose,
                                    const IndexedMesh& mesh,
                                    const EncodeOptions& options,
                                    int threads) {
  if (observed.size() != bps.size()) {
    throw std::invalid_argument(
        "observed magnitudes have " + std::to_string(observed.size()) +
        " entries, basis point set has " + std::to_string(bps.size()));
  }
  CheckEncodable(mesh, options);
  const std::vector<BasisPointQuery> queries =
      QueryAll(bps, pose, mesh, options, threads);
  const std::size_t n = queries.size();

  std::vector<double> predicted(n);
  for (std::size_t k = 0; k < n; ++k) predicted[k] = queries[k].magnitude;

  BpsDistanceGradient out;
  out.value = MeanAbsoluteDifference(observed, predicted);

  // Per-component contributions, summed in a fixed order.
  std::vector<double> terms[6];
  for (auto& t : terms) t.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const JacobianRow row = RowFromQuery(queries[k], pose);
    if (!row.valid) continue;
    ++out.valid_entries;
    const double diff = predicted[k] - observed[k];
    const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    for (int i = 0; i < 3; ++i) {
      terms[i][k] = sign * row.d_translation[i];
      terms[3 + i][k] = sign * row.d_rotation[i];
    }
  }
  if (n > 0) {
    for (int i = 0; i < 3; ++i) {
      out.d_translation[i] = PairwiseSum(terms[i]) / static_cast<double>(n);
      out.d_rotation[i] = PairwiseSum(terms[3 + i]) / static_cast<double>(n);
    }
  }
  return out;
}

int GradientCheckReport::passed() const {
  return static_cast<int>(std::count_if(
      entries.begin(), entries.end(),
      [](const GradientCheckEntry& e) { return e.passed; }));
}

int GradientCheckReport::unexplained_failures() const {
  return static_cast<int>(std::count_if(
      entries.begin(), entries.end(), [](const GradientCheckEntry& e) {
        return !e.passed && !e.transition;
      }));
}

double GradientCheckReport::pass_fraction() const {
  if (entries.empty()) return 1.0;
  return static_cast<double>(passed()) / static_cast<double>(entries.size());
}

GradientCheckReport CheckGradients(const BasisPointSet& bps, const Pose& pose,
                                   const IndexedMesh& mesh,
                                   const GradientCheckOptions& check,
                                   const EncodeOptions& options) {
  const PoseJacobian jacobian = GradMagnitudes(bps, pose, mesh, options);
  GradientCheckReport report;

  for (std::size_t k = 0; k < bps.size(); ++k) {
    if (!jacobian.valid[k]) continue;
    const Vec3& p = bps.points[k];
    const BasisPointQuery base = QueryBasisPoint(p, pose, mesh, options);
    const std::vector<int> base_feature = mesh.FeatureVertices(base.canonical);

    for (bool rotation : {false, true}) {
      GradientCheckEntry entry;
      entry.basis_point = static_cast<int>(k);
      entry.rotation = rotation;
      entry.analytic =
          rotation ? jacobian.d_rotation[k] : jacobian.d_translation[k];
      const double step =
          rotation ? check.rotation_step : check.translation_step;

      for (int axis = 0; axis < 3; ++axis) {
        double values[2];
        for (int side = 0; side < 2; ++side) {
          const Vec3 delta = (side == 0 ? step : -step) * Vec3::Unit(axis);
          const Pose perturbed =
              rotation ? Pose{pose.position, ExpSo3(delta) * pose.rotation}
                       : Pose{pose.position + delta, pose.rotation};
          const BasisPointQuery q =
              QueryBasisPoint(p, perturbed, mesh, options);
          values[side] = q.magnitude;
          if (q.interior != base.interior ||
              mesh.FeatureVertices(q.canonical) != base_feature) {
            entry.transition = true;
          }
        }
        entry.numeric[axis] = (values[0] - values[1]) / (2.0 * step);
      }

      const double floor = rotation ? check.rotation_scale_floor : 1.0;
      const double scale =
          std::max({entry.analytic.norm(), entry.numeric.norm(), floor});
      entry.relative_error = (entry.analytic - entry.numeric).norm() / scale;
      entry.passed = entry.relative_error <= check.tolerance;
      report.entries.push_back(entry);
    }
  }
  return report;
}

}  // namespace dynbps

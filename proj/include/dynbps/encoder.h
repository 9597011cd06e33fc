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

#ifndef DYNBPS_ENCODER_H_
#define DYNBPS_ENCODER_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "dynbps/basis_points.h"
#include "dynbps/geometry.h"
#include "dynbps/indexed_mesh.h"
#include "dynbps/rotations.h"

namespace dynbps {

// What to do with basis points inside the posed surface.
//   kZero: emit a zero vector and set the interior flag. Needs a watertight
//          mesh; otherwise encoding throws ContainmentUnavailableError.
//   kSkip: treat every point as exterior. Intended for open scans; callers
//          should warn their users.
enum class InteriorPolicy { kZero, kSkip };

struct EncodeOptions {
  InteriorPolicy interior = InteriorPolicy::kZero;
  QueryBackend backend = QueryBackend::kBvh;
};

// One entry per basis point, in BasisPointSet order. vectors[k] points from
// basis point k to its closest point on the posed surface; zero inside.
struct BpsEncoding {
  std::vector<Vec3> vectors;
  std::vector<double> magnitudes;
  std::vector<bool> interior_mask;

  std::size_t size() const { return vectors.size(); }
};

// Everything known about a single basis point at a pose.
struct BasisPointQuery {
  Vec3 vector = Vec3::Zero();
  double magnitude = 0.0;
  bool interior = false;
  // Closest point on the canonical mesh to the pulled-back basis point.
  SurfacePoint canonical;
  // The same point on the posed surface: rotation * canonical + position.
  Vec3 world_closest = Vec3::Zero();
};

// Encodes one basis point against the posed surface by pulling the point
// back into the mesh frame, R^T (p - x), and mapping the answer forward.
BasisPointQuery QueryBasisPoint(const Vec3& basis_point, const Pose& pose,
                                const IndexedMesh& mesh,
                                const EncodeOptions& options = {});

BpsEncoding EncodeDynamic(const BasisPointSet& bps, const Pose& pose,
                          const IndexedMesh& mesh,
                          const EncodeOptions& options = {});

// Canonical pose (x = 0, R = I).
BpsEncoding EncodeStatic(const BasisPointSet& bps, const IndexedMesh& mesh,
                         const EncodeOptions& options = {});
// Builds the hierarchy for a one-off encoding.
BpsEncoding EncodeStatic(const BasisPointSet& bps, const TriangleMesh& mesh,
                         const EncodeOptions& options = {});

using MeshTable = std::map<std::string, IndexedMesh>;

struct PosedMesh {
  Pose pose;
  std::string mesh_id;
};

// Encodes every (pose, mesh) entry, spreading (entry, basis point) pairs over
// `threads` workers. Output order follows the input and every encoding is
// bit-identical to EncodeDynamic. Throws std::out_of_range for an unknown
// mesh id before any work starts.
std::vector<BpsEncoding> EncodeBatch(const BasisPointSet& bps,
                                     std::span<const PosedMesh> entries,
                                     const MeshTable& meshes, int threads = 1,
                                     const EncodeOptions& options = {});

std::vector<double> MagnitudesOnly(const BpsEncoding& encoding);

}  // namespace dynbps

#endif  // DYNBPS_ENCODER_H_

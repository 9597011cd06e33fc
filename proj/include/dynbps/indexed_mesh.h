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

#ifndef DYNBPS_INDEXED_MESH_H_
#define DYNBPS_INDEXED_MESH_H_

#include <memory>
#include <vector>

#include "dynbps/bvh.h"
#include "dynbps/geometry.h"
#include "dynbps/mesh.h"

namespace dynbps {

enum class QueryBackend { kBvh, kBruteForce };

// A validated mesh with its hierarchy. Immutable and cheap to copy; copies
// share the same underlying data, so it can be handed to worker threads.
class IndexedMesh {
 public:
  // Validates `mesh` (removing degenerate triangles) and builds the BVH.
  explicit IndexedMesh(TriangleMesh mesh);

  const TriangleMesh& mesh() const { return data_->mesh; }
  const Bvh& bvh() const { return data_->bvh; }
  const ValidationReport& validation() const { return data_->validation; }
  bool watertight() const { return data_->mesh.watertight; }

  SurfacePoint Closest(const Vec3& p,
                       QueryBackend backend = QueryBackend::kBvh) const;
  // See ContainsPoint.
  bool Contains(const Vec3& p,
                QueryBackend backend = QueryBackend::kBvh) const;
  // Parity test only; the caller has already ruled out surface contact.
  bool ContainsOffSurface(const Vec3& p, QueryBackend backend) const;

  // Sorted vertex indices of the feature holding `point` (3 for a face, 2 for
  // an edge, 1 for a vertex). Equal across triangles sharing that feature.
  std::vector<int> FeatureVertices(const SurfacePoint& point) const;

 private:
  struct Data {
    TriangleMesh mesh;
    ValidationReport validation;
    Bvh bvh;
  };
  std::shared_ptr<const Data> data_;
};

}  // namespace dynbps

#endif  // DYNBPS_INDEXED_MESH_H_

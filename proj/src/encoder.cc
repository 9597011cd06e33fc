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

#include "dynbps/encoder.h"

#include <stdexcept>

#include "dynbps/errors.h"
#include "dynbps/parallel.h"

namespace dynbps {
namespace {

void CheckPolicy(const IndexedMesh& mesh, const EncodeOptions& options) {
  if (options.interior == InteriorPolicy::kZero && !mesh.watertight()) {
    throw ContainmentUnavailableError(
        "interior zeroing needs a watertight mesh; encode with the skip "
        "interior policy to treat all basis points as exterior");
  }
}

BpsEncoding Assemble(std::span<const BasisPointQuery> queries) {
  BpsEncoding encoding;
  encoding.vectors.reserve(queries.size());
  encoding.magnitudes.reserve(queries.size());
  encoding.interior_mask.reserve(queries.size());
  for (const BasisPointQuery& q : queries) {
    encoding.vectors.push_back(q.vector);
    encoding.magnitudes.push_back(q.magnitude);
    encoding.interior_mask.push_back(q.interior);
  }
  return encoding;
}

}  // namespace

BasisPointQuery QueryBasisPoint(const Vec3& basis_point, const Pose& pose,
                                const IndexedMesh& mesh,
                                const EncodeOptions& options) {
  BasisPointQuery out;
  const Vec3 local = pose.rotation.transpose() * (basis_point - pose.position);
  out.canonical = mesh.Closest(local, options.backend);
  out.world_closest = pose.rotation * out.canonical.point + pose.position;

  if (out.canonical.distance < kSurfaceContactDistance) {
    out.interior = options.interior == InteriorPolicy::kZero;
    return out;
  }
  if (options.interior == InteriorPolicy::kZero &&
      mesh.ContainsOffSurface(local, options.backend)) {
    out.interior = true;
    return out;
  }
  out.vector = out.world_closest - basis_point;
  out.magnitude = out.vector.norm();
  return out;
}

BpsEncoding EncodeDynamic(const BasisPointSet& bps, const Pose& pose,
                          const IndexedMesh& mesh,
                          const EncodeOptions& options) {
  CheckPolicy(mesh, options);
  std::vector<BasisPointQuery> queries;
  queries.reserve(bps.size());
  for (const Vec3& p : bps.points) {
    queries.push_back(QueryBasisPoint(p, pose, mesh, options));
  }
  return Assemble(queries);
}

BpsEncoding EncodeStatic(const BasisPointSet& bps, const IndexedMesh& mesh,
                         const EncodeOptions& options) {
  return EncodeDynamic(bps, Pose::Identity(), mesh, options);
}

BpsEncoding EncodeStatic(const BasisPointSet& bps, const TriangleMesh& mesh,
                         const EncodeOptions& options) {
  return EncodeStatic(bps, IndexedMesh(mesh), options);
}

std::vector<BpsEncoding> EncodeBatch(const BasisPointSet& bps,
                                     std::span<const PosedMesh> entries,
                                     const MeshTable& meshes, int threads,
                                     const EncodeOptions& options) {
  std::vector<const IndexedMesh*> resolved;
  resolved.reserve(entries.size());
  for (const PosedMesh& entry : entries) {
    auto it = meshes.find(entry.mesh_id);
    if (it == meshes.end()) {
      throw std::out_of_range("unknown mesh id '" + entry.mesh_id + "'");
    }
    CheckPolicy(it->second, options);
    resolved.push_back(&it->second);
  }

  const std::size_t n = bps.size();
  std::vector<BasisPointQuery> slots(entries.size() * n);
  ParallelFor(slots.size(), threads, [&](std::size_t slot) {
    const std::size_t entry = slot / n;
    slots[slot] = QueryBasisPoint(bps.points[slot % n], entries[entry].pose,
                                  *resolved[entry], options);
  });

  std::vector<BpsEncoding> encodings;
  encodings.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    encodings.push_back(
        Assemble(std::span<const BasisPointQuery>(slots).subspan(i * n, n)));
  }
  return encodings;
}

std::vector<double> MagnitudesOnly(const BpsEncoding& encoding) {
  std::vector<double> out;
  out.reserve(encoding.size());
  for (const Vec3& v : encoding.vectors) out.push_back(v.norm());
  return out;
}

}  // namespace dynbps

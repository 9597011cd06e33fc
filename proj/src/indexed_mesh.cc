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

#include "dynbps/indexed_mesh.h"

#include <algorithm>

#include "dynbps/errors.h"

namespace dynbps {

IndexedMesh::IndexedMesh(TriangleMesh mesh) {
  auto data = std::make_shared<Data>();
  data->validation = Validate(mesh);
  data->mesh = std::move(mesh);
  data->bvh = BuildBvh(data->mesh);
  data_ = std::move(data);
}

SurfacePoint IndexedMesh::Closest(const Vec3& p, QueryBackend backend) const {
  return backend == QueryBackend::kBvh
             ? ClosestPointOnMesh(data_->bvh, data_->mesh, p)
             : ClosestPointBruteForce(data_->mesh, p);
}

bool IndexedMesh::Contains(const Vec3& p, QueryBackend backend) const {
  return backend == QueryBackend::kBvh
             ? ContainsPoint(data_->bvh, data_->mesh, p)
             : ContainsPointBruteForce(data_->mesh, p);
}

bool IndexedMesh::ContainsOffSurface(const Vec3& p,
                                     QueryBackend backend) const {
  if (!watertight()) {
    throw ContainmentUnavailableError(
        "point containment needs a watertight mesh");
  }
  return internal::RayParityInside(
      backend == QueryBackend::kBvh ? &data_->bvh : nullptr, data_->mesh, p);
}

std::vector<int> IndexedMesh::FeatureVertices(const SurfacePoint& point) const {
  const Triangle& t = data_->mesh.triangles[point.triangle_id];
  std::vector<int> ids;
  switch (point.feature) {
    case TriangleFeature::kVertexA: ids = {t[0]}; break;
    case TriangleFeature::kVertexB: ids = {t[1]}; break;
    case TriangleFeature::kVertexC: ids = {t[2]}; break;
    case TriangleFeature::kEdgeAB: ids = {t[0], t[1]}; break;
    case TriangleFeature::kEdgeBC: ids = {t[1], t[2]}; break;
    case TriangleFeature::kEdgeCA: ids = {t[2], t[0]}; break;
    case TriangleFeature::kFace: ids = {t[0], t[1], t[2]}; break;
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace dynbps

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

#ifndef DYNBPS_GEOMETRY_H_
#define DYNBPS_GEOMETRY_H_

#include <cstdint>

#include "dynbps/mesh.h"

namespace dynbps {

// Which closed feature of a triangle (a, b, c) holds a closest point.
enum class TriangleFeature : std::uint8_t {
  kVertexA,
  kVertexB,
  kVertexC,
  kEdgeAB,
  kEdgeBC,
  kEdgeCA,
  kFace,
};

struct SurfacePoint {
  Vec3 point = Vec3::Zero();
  double distance = 0.0;
  int triangle_id = -1;
  // Weights of (a, b, c); each in [0, 1], summing to 1.
  Vec3 barycentric = Vec3::Zero();
  TriangleFeature feature = TriangleFeature::kFace;
};

// Closest point of the closed triangle (a, b, c) to p, with the Voronoi
// feature it lies on. triangle_id is left at -1. Throws std::invalid_argument
// for triangles with area below kMinTriangleArea.
SurfacePoint ClosestPointOnTriangle(const Vec3& p, const Vec3& a,
                                    const Vec3& b, const Vec3& c);

namespace internal {
// Same as ClosestPointOnTriangle without the degeneracy check.
SurfacePoint ClosestPointOnTriangleUnchecked(const Vec3& p, const Vec3& a,
                                             const Vec3& b, const Vec3& c);
}  // namespace internal

}  // namespace dynbps

#endif  // DYNBPS_GEOMETRY_H_

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

#ifndef DYNBPS_BVH_H_
#define DYNBPS_BVH_H_

#include <vector>

#include <Eigen/Geometry>

#include "dynbps/geometry.h"
#include "dynbps/mesh.h"

namespace dynbps {

inline constexpr int kMaxLeafSize = 4;

// Query points closer than this to the surface count as inside.
inline constexpr double kSurfaceContactDistance = 1e-12;

// Rays passing closer than this to a mesh edge or vertex are re-cast.
inline constexpr double kRayEdgeClearance = 1e-9;

struct BvhNode {
  Eigen::AlignedBox3d box;
  // Internal nodes: child node indices. Leaves: left == right == -1.
  int left = -1;
  int right = -1;
  // Leaves: range [first, first + count) of Bvh::leaf_triangles.
  int first = 0;
  int count = 0;

  bool is_leaf() const { return left < 0; }
};

// Binary hierarchy over a mesh's triangles. nodes[0] is the root; empty for a
// mesh without triangles. Immutable after BuildBvh.
struct Bvh {
  std::vector<BvhNode> nodes;
  std::vector<int> leaf_triangles;
};

// Top-down build: each node splits its triangles at the median centroid along
// the longest axis of the centroid bounds until at most kMaxLeafSize remain.
// Deterministic for a given mesh.
Bvh BuildBvh(const TriangleMesh& mesh);

// Globally closest surface point. Ties between triangles go to the lowest
// triangle_id. Throws std::invalid_argument for an empty mesh.
SurfacePoint ClosestPointOnMesh(const Bvh& bvh, const TriangleMesh& mesh,
                                const Vec3& p);

// Reference scan over every triangle with the same tie rule.
SurfacePoint ClosestPointBruteForce(const TriangleMesh& mesh, const Vec3& p);

// True iff p is strictly inside the closed surface, or within
// kSurfaceContactDistance of it. Uses crossing parity along a fixed oblique
// ray, re-cast in a new direction whenever the ray grazes an edge or vertex.
// Throws ContainmentUnavailableError unless mesh.watertight.
bool ContainsPoint(const Bvh& bvh, const TriangleMesh& mesh, const Vec3& p);

// Containment without the hierarchy; same decisions as ContainsPoint.
bool ContainsPointBruteForce(const TriangleMesh& mesh, const Vec3& p);

namespace internal {
// Direction of the `attempt`-th containment ray (unit length).
Vec3 ContainmentRayDirection(int attempt);

// Crossing-parity inside test for a point already known to be off the
// surface. `bvh` may be null for a brute-force scan.
bool RayParityInside(const Bvh* bvh, const TriangleMesh& mesh, const Vec3& p);
}  // namespace internal

}  // namespace dynbps

#endif  // DYNBPS_BVH_H_

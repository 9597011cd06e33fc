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

#include "dynbps/bvh.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dynbps/errors.h"

namespace dynbps {
namespace {

constexpr int kMaxRayAttempts = 32;

class BvhBuilder {
 public:
  explicit BvhBuilder(const TriangleMesh& mesh) : mesh_(mesh) {
    const std::size_t n = mesh.num_triangles();
    centroids_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      centroids_.push_back(
          (mesh.corner(i, 0) + mesh.corner(i, 1) + mesh.corner(i, 2)) / 3.0);
    }
  }

  Bvh Build() {
    bvh_.leaf_triangles.resize(mesh_.num_triangles());
    std::iota(bvh_.leaf_triangles.begin(), bvh_.leaf_triangles.end(), 0);
    if (!bvh_.leaf_triangles.empty()) {
      bvh_.nodes.reserve(2 * mesh_.num_triangles() / kMaxLeafSize + 1);
      BuildNode(0, static_cast<int>(bvh_.leaf_triangles.size()));
    }
    return std::move(bvh_);
  }

 private:
  int BuildNode(int begin, int end) {
    const int id = static_cast<int>(bvh_.nodes.size());
    bvh_.nodes.emplace_back();

    Eigen::AlignedBox3d box;
    Eigen::AlignedBox3d centroid_box;
    for (int i = begin; i < end; ++i) {
      const int t = bvh_.leaf_triangles[i];
      for (int c = 0; c < 3; ++c) box.extend(mesh_.corner(t, c));
      centroid_box.extend(centroids_[t]);
    }
    bvh_.nodes[id].box = box;

    if (end - begin <= kMaxLeafSize) {
      bvh_.nodes[id].first = begin;
      bvh_.nodes[id].count = end - begin;
      return id;
    }

    int axis = 0;
    centroid_box.sizes().maxCoeff(&axis);
    const int mid = begin + (end - begin) / 2;
    auto first = bvh_.leaf_triangles.begin();
    std::nth_element(first + begin, first + mid, first + end,
                     [&](int a, int b) {
                       const double ca = centroids_[a][axis];
                       const double cb = centroids_[b][axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    const int left = BuildNode(begin, mid);
    const int right = BuildNode(mid, end);
    bvh_.nodes[id].left = left;
    bvh_.nodes[id].right = right;
    return id;
  }

  const TriangleMesh& mesh_;
  std::vector<Vec3> centroids_;
  Bvh bvh_;
};

double SquaredDistanceToBox(const Eigen::AlignedBox3d& box, const Vec3& p) {
  return box.squaredExteriorDistance(p);
}

// Candidate is better if strictly closer, or equally close with a lower id.
bool Better(const SurfacePoint& candidate, const SurfacePoint& best) {
  return candidate.distance < best.distance ||
         (candidate.distance == best.distance &&
          candidate.triangle_id < best.triangle_id);
}

enum class Crossing { kMiss, kHit, kAmbiguous };

Crossing RayCrossesTriangle(const Vec3& origin, const Vec3& dir,
                            const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double n_norm = n.norm();
  const double denom = n.dot(dir);
  if (std::abs(denom) <= 1e-12 * n_norm) {
    // Ray parallel to the plane: only a concern if it runs inside it.
    const double height = std::abs(n.dot(origin - a)) / n_norm;
    return height < kRayEdgeClearance ? Crossing::kAmbiguous : Crossing::kMiss;
  }
  const double t = n.dot(a - origin) / denom;
  if (t <= 0.0) return Crossing::kMiss;
  const Vec3 hit = origin + t * dir;

  // Signed in-plane distance from the hit to each edge, positive inside.
  double min_clearance = std::numeric_limits<double>::infinity();
  const Vec3* corners[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i) {
    const Vec3& from = *corners[i];
    const Vec3& to = *corners[(i + 1) % 3];
    const Vec3 inward = n.cross(to - from);
    min_clearance =
        std::min(min_clearance, inward.dot(hit - from) / inward.norm());
  }
  if (min_clearance > kRayEdgeClearance) return Crossing::kHit;
  if (min_clearance < -kRayEdgeClearance) return Crossing::kMiss;
  return Crossing::kAmbiguous;
}

bool RayHitsBox(const Eigen::AlignedBox3d& box, const Vec3& origin,
                const Vec3& inv_dir) {
  double t_near = 0.0;
  double t_far = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    // Slack covers the clearance band around triangles on the box boundary.
    const double lo = box.min()[i] - kRayEdgeClearance;
    const double hi = box.max()[i] + kRayEdgeClearance;
    if (std::isinf(inv_dir[i])) {
      if (origin[i] < lo || origin[i] > hi) return false;
      continue;
    }
    double t0 = (lo - origin[i]) * inv_dir[i];
    double t1 = (hi - origin[i]) * inv_dir[i];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return false;
  }
  return true;
}

// Returns the crossing count, or -1 if any triangle was ambiguous.
int CountCrossings(const Bvh* bvh, const TriangleMesh& mesh, const Vec3& p,
                   const Vec3& dir) {
  int crossings = 0;
  auto visit = [&](int t) {
    switch (RayCrossesTriangle(p, dir, mesh.corner(t, 0), mesh.corner(t, 1),
                               mesh.corner(t, 2))) {
      case Crossing::kHit:
        ++crossings;
        return true;
      case Crossing::kMiss:
        return true;
      case Crossing::kAmbiguous:
        return false;
    }
    return false;
  };

  if (bvh == nullptr) {
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      if (!visit(static_cast<int>(t))) return -1;
    }
    return crossings;
  }

  const Vec3 inv_dir = dir.cwiseInverse();
  std::vector<int> stack;
  stack.reserve(64);
  if (!bvh->nodes.empty()) stack.push_back(0);
  while (!stack.empty()) {
    const BvhNode& node = bvh->nodes[stack.back()];
    stack.pop_back();
    if (!RayHitsBox(node.box, p, inv_dir)) continue;
    if (node.is_leaf()) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        if (!visit(bvh->leaf_triangles[i])) return -1;
      }
    } else {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
  return crossings;
}

void RequireWatertight(const TriangleMesh& mesh) {
  if (!mesh.watertight) {
    throw ContainmentUnavailableError(
        "point containment needs a watertight mesh");
  }
}

}  // namespace

Bvh BuildBvh(const TriangleMesh& mesh) { return BvhBuilder(mesh).Build(); }

SurfacePoint ClosestPointOnMesh(const Bvh& bvh, const TriangleMesh& mesh,
                                const Vec3& p) {
  if (bvh.nodes.empty() || mesh.triangles.empty()) {
    throw std::invalid_argument("closest point query on an empty mesh");
  }
  SurfacePoint best;
  best.distance = std::numeric_limits<double>::infinity();
  double best_sq = std::numeric_limits<double>::infinity();

  struct Entry {
    int node;
    double box_sq;
  };
  std::vector<Entry> stack;
  stack.reserve(64);
  stack.push_back({0, SquaredDistanceToBox(bvh.nodes[0].box, p)});
  while (!stack.empty()) {
    const Entry entry = stack.back();
    stack.pop_back();
    // Relative slack keeps exact ties with lower ids from being pruned.
    if (entry.box_sq > best_sq * (1.0 + 1e-12)) continue;
    const BvhNode& node = bvh.nodes[entry.node];
    if (node.is_leaf()) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const int t = bvh.leaf_triangles[i];
        SurfacePoint candidate = internal::ClosestPointOnTriangleUnchecked(
            p, mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2));
        candidate.triangle_id = t;
        if (Better(candidate, best)) {
          best = candidate;
          best_sq = best.distance * best.distance;
        }
      }
      continue;
    }
    const double left_sq = SquaredDistanceToBox(bvh.nodes[node.left].box, p);
    const double right_sq = SquaredDistanceToBox(bvh.nodes[node.right].box, p);
    // Nearer child on top of the stack.
    if (left_sq <= right_sq) {
      stack.push_back({node.right, right_sq});
      stack.push_back({node.left, left_sq});
    } else {
      stack.push_back({node.left, left_sq});
      stack.push_back({node.right, right_sq});
    }
  }
  return best;
}

SurfacePoint ClosestPointBruteForce(const TriangleMesh& mesh, const Vec3& p) {
  if (mesh.triangles.empty()) {
    throw std::invalid_argument("closest point query on an empty mesh");
  }
  SurfacePoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    SurfacePoint candidate = internal::ClosestPointOnTriangleUnchecked(
        p, mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2));
    candidate.triangle_id = static_cast<int>(t);
    if (Better(candidate, best)) best = candidate;
  }
  return best;
}

bool ContainsPoint(const Bvh& bvh, const TriangleMesh& mesh, const Vec3& p) {
  RequireWatertight(mesh);
  if (ClosestPointOnMesh(bvh, mesh, p).distance < kSurfaceContactDistance) {
    return true;
  }
  return internal::RayParityInside(&bvh, mesh, p);
}

bool ContainsPointBruteForce(const TriangleMesh& mesh, const Vec3& p) {
  RequireWatertight(mesh);
  if (ClosestPointBruteForce(mesh, p).distance < kSurfaceContactDistance) {
    return true;
  }
  return internal::RayParityInside(nullptr, mesh, p);
}

namespace internal {

Vec3 ContainmentRayDirection(int attempt) {
  const Vec3 base = Vec3(1.0, std::sqrt(2.0), std::sqrt(3.0)).normalized();
  if (attempt == 0) return base;
  const double k = attempt;
  const Vec3 jitter(std::sin(1.7 * k), std::sin(2.9 * k + 1.0),
                    std::sin(4.3 * k + 2.0));
  return (base + 0.5 * jitter).normalized();
}

bool RayParityInside(const Bvh* bvh, const TriangleMesh& mesh, const Vec3& p) {
  for (int attempt = 0; attempt < kMaxRayAttempts; ++attempt) {
    const int crossings =
        CountCrossings(bvh, mesh, p, ContainmentRayDirection(attempt));
    if (crossings >= 0) return crossings % 2 == 1;
  }
  throw std::runtime_error("containment rays kept grazing mesh edges");
}

}  // namespace internal
}  // namespace dynbps

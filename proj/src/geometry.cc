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

#include "dynbps/geometry.h"

#include <stdexcept>

#include <Eigen/Geometry>

namespace dynbps {
namespace internal {

// Voronoi-region walk over the triangle's vertices, edges and face.
SurfacePoint ClosestPointOnTriangleUnchecked(const Vec3& p, const Vec3& a,
                                             const Vec3& b, const Vec3& c) {
  SurfacePoint out;
  auto finish = [&](const Vec3& weights, TriangleFeature feature) {
    out.barycentric = weights;
    out.feature = feature;
    out.distance = (p - out.point).norm();
    return out;
  };

  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) {
    out.point = a;
    return finish(Vec3(1, 0, 0), TriangleFeature::kVertexA);
  }

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) {
    out.point = b;
    return finish(Vec3(0, 1, 0), TriangleFeature::kVertexB);
  }

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    out.point = a + v * ab;
    return finish(Vec3(1 - v, v, 0), TriangleFeature::kEdgeAB);
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) {
    out.point = c;
    return finish(Vec3(0, 0, 1), TriangleFeature::kVertexC);
  }

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    out.point = a + w * ac;
    return finish(Vec3(1 - w, 0, w), TriangleFeature::kEdgeCA);
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    out.point = b + w * (c - b);
    return finish(Vec3(0, 1 - w, w), TriangleFeature::kEdgeBC);
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  out.point = a + ab * v + ac * w;
  return finish(Vec3(1 - v - w, v, w), TriangleFeature::kFace);
}

}  // namespace internal

SurfacePoint ClosestPointOnTriangle(const Vec3& p, const Vec3& a,
                                    const Vec3& b, const Vec3& c) {
  if (0.5 * (b - a).cross(c - a).norm() < kMinTriangleArea) {
    throw std::invalid_argument("closest point on a degenerate triangle");
  }
  return internal::ClosestPointOnTriangleUnchecked(p, a, b, c);
}

}  // namespace dynbps

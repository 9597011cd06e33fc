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

#ifndef DYNBPS_TESTS_TEST_SUPPORT_H_
#define DYNBPS_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "dynbps/mesh.h"
#include "dynbps/rotations.h"

namespace dynbps::testing {

// Closest distance from p to triangle abc, computed as the minimum over the
// in-plane projection (when it lands inside) and the three edge segments.
inline double TriangleDistanceOracle(const Vec3& p, const Vec3& a,
                                     const Vec3& b, const Vec3& c) {
  auto segment = [&](const Vec3& s, const Vec3& e) {
    const Vec3 d = e - s;
    const double t = std::clamp((p - s).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (s + t * d - p).norm();
  };
  double best = std::min({segment(a, b), segment(b, c), segment(c, a)});
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  Eigen::Matrix2d gram;
  gram << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  const Eigen::Vector2d rhs((p - a).dot(e1), (p - a).dot(e2));
  const Eigen::Vector2d st = gram.ldlt().solve(rhs);
  if (st[0] >= 0.0 && st[1] >= 0.0 && st[0] + st[1] <= 1.0) {
    best = std::min(best, (a + st[0] * e1 + st[1] * e2 - p).norm());
  }
  return best;
}

inline double MeshDistanceOracle(const TriangleMesh& mesh, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    best = std::min(best, TriangleDistanceOracle(p, mesh.corner(t, 0),
                                                 mesh.corner(t, 1),
                                                 mesh.corner(t, 2)));
  }
  return best;
}

// Icosphere with each vertex pushed radially by up to `noise` of the radius.
// Star-shaped, so it stays watertight and outward oriented.
inline TriangleMesh MakeBumpySphere(double radius, int subdivisions,
                                    double noise, Rng& rng) {
  TriangleMesh mesh = MakeIcosphere(radius, subdivisions);
  std::uniform_real_distribution<double> u(1.0 - noise, 1.0 + noise);
  for (Vec3& v : mesh.vertices) v *= u(rng);
  return mesh;
}

// Ten meshes of varied shape: cube, cuboid, icosphere, L, and randomized
// boxes, bumpy spheres and rotated copies.
inline std::vector<TriangleMesh> MeshZoo(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> size(0.02, 0.06);
  std::vector<TriangleMesh> meshes;
  meshes.push_back(MakeBox(Vec3::Constant(0.05)));
  meshes.push_back(MakeBox(Vec3(0.05, 0.05, 0.08)));
  meshes.push_back(MakeIcosphere(0.05, 2));
  meshes.push_back(MakeLShape(0.03));
  meshes.push_back(MakeBox(Vec3(size(rng), size(rng), size(rng))));
  meshes.push_back(MakeBumpySphere(0.045, 2, 0.2, rng));
  meshes.push_back(MakeBumpySphere(0.06, 3, 0.1, rng));
  meshes.push_back(TransformMesh(MakeLShape(0.025), SampleUniformRotation(rng),
                                 Vec3(0.005, -0.01, 0.0)));
  meshes.push_back(TransformMesh(MakeBox(Vec3(0.04, 0.02, 0.03)),
                                 SampleUniformRotation(rng), Vec3::Zero()));
  meshes.push_back(MakeCellUnion({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}},
                                 0.025, Vec3(-0.025, -0.025, -0.025)));
  return meshes;
}

inline Vec3 UniformInCube(double half, Rng& rng) {
  std::uniform_real_distribution<double> u(-half, half);
  return Vec3(u(rng), u(rng), u(rng));
}

inline Pose RandomPose(double max_offset, Rng& rng) {
  Pose pose;
  pose.rotation = SampleUniformRotation(rng);
  pose.position = UniformInCube(max_offset, rng);
  return pose;
}

inline const char* kCubeObj =
    "v -0.05 -0.05 -0.05\nv 0.05 -0.05 -0.05\nv 0.05 0.05 -0.05\n"
    "v -0.05 0.05 -0.05\nv -0.05 -0.05 0.05\nv 0.05 -0.05 0.05\n"
    "v 0.05 0.05 0.05\nv -0.05 0.05 0.05\n"
    "f 1 4 3 2\nf 5 6 7 8\nf 1 2 6 5\nf 2 3 7 6\nf 3 4 8 7\nf 4 1 5 8\n";

}  // namespace dynbps::testing

#endif  // DYNBPS_TESTS_TEST_SUPPORT_H_

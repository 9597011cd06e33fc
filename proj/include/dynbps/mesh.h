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

#ifndef DYNBPS_MESH_H_
#define DYNBPS_MESH_H_

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dynbps {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Triangle = std::array<int, 3>;

// Triangles below this area are removed by Validate (square meters).
inline constexpr double kMinTriangleArea = 1e-12;

// Indexed triangle surface in meters. `watertight` is only meaningful after
// Validate() has run on the mesh.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  bool watertight = false;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  const Vec3& corner(std::size_t triangle, int i) const {
    return vertices[triangles[triangle][i]];
  }
  double TriangleArea(std::size_t triangle) const;
  // Largest vertex distance from the origin of the mesh frame.
  double MaxVertexRadius() const;
};

using Edge = std::pair<int, int>;

struct ValidationReport {
  // Indices refer to the triangle list as it was before removal.
  std::vector<int> invalid_triangles;     // bad index or non-finite vertex
  std::vector<int> degenerate_triangles;  // area < kMinTriangleArea
  // Pairs (first, later) of triangles over the same vertex set; reported,
  // not removed.
  std::vector<std::pair<int, int>> duplicate_triangles;
  // Undirected edges (sorted vertex pair) with exactly one incident triangle.
  std::vector<Edge> boundary_edges;
  // Edges with more than two incident triangles.
  std::vector<Edge> nonmanifold_edges;
  // Edges with two incident triangles that traverse it in the same direction.
  std::vector<Edge> inconsistent_edges;
  bool watertight = false;

  std::size_t num_removed() const {
    return invalid_triangles.size() + degenerate_triangles.size();
  }
};

// Removes invalid and degenerate triangles in place, sets mesh.watertight and
// returns the diagnostics. Watertight means every edge is shared by exactly
// two triangles that traverse it in opposite directions.
ValidationReport Validate(TriangleMesh& mesh);

// Returns a copy of `mesh` with every vertex mapped to rotation * v + offset.
TriangleMesh TransformMesh(const TriangleMesh& mesh, const Mat3& rotation,
                           const Vec3& offset);

// ---------------------------------------------------------------------------
// Procedural shapes. All outward oriented, watertight, centered at the origin.

// Axis-aligned box with the given half extents: 8 vertices, 12 triangles.
TriangleMesh MakeBox(const Vec3& half_extents);

// Union of unit cells of size `cell` on an integer lattice, e.g. an L shape
// from three cells. Cells must not touch only along an edge or a corner.
TriangleMesh MakeCellUnion(const std::vector<std::array<int, 3>>& cells,
                           double cell, const Vec3& origin);

// Non-convex L made of three cubes of edge `cell`, recentered on its bounds.
TriangleMesh MakeLShape(double cell);

// Icosahedron subdivided `subdivisions` times: 20 * 4^s triangles.
TriangleMesh MakeIcosphere(double radius, int subdivisions);

// Latitude/longitude sphere: 2 * slices * (stacks - 1) triangles.
TriangleMesh MakeUvSphere(double radius, int slices, int stacks);

}  // namespace dynbps

#endif  // DYNBPS_MESH_H_

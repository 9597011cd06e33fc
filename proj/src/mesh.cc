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

#include "dynbps/mesh.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <Eigen/Geometry>

namespace dynbps {

double TriangleMesh::TriangleArea(std::size_t triangle) const {
  const Vec3& a = corner(triangle, 0);
  return 0.5 * (corner(triangle, 1) - a).cross(corner(triangle, 2) - a).norm();
}

double TriangleMesh::MaxVertexRadius() const {
  double r = 0.0;
  for (const Vec3& v : vertices) r = std::max(r, v.norm());
  return r;
}

ValidationReport Validate(TriangleMesh& mesh) {
  ValidationReport report;
  const int num_vertices = static_cast<int>(mesh.vertices.size());

  std::vector<Triangle> kept;
  std::vector<int> kept_original_id;
  kept.reserve(mesh.triangles.size());
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const Triangle& t = mesh.triangles[i];
    bool valid = true;
    for (int c = 0; c < 3 && valid; ++c) {
      valid = t[c] >= 0 && t[c] < num_vertices &&
              mesh.vertices[t[c]].allFinite();
    }
    if (!valid) {
      report.invalid_triangles.push_back(static_cast<int>(i));
      continue;
    }
    if (mesh.TriangleArea(i) < kMinTriangleArea) {
      report.degenerate_triangles.push_back(static_cast<int>(i));
      continue;
    }
    kept.push_back(t);
    kept_original_id.push_back(static_cast<int>(i));
  }

  std::map<Triangle, int> first_seen;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    Triangle key = kept[i];
    std::sort(key.begin(), key.end());
    auto [it, inserted] = first_seen.emplace(key, kept_original_id[i]);
    if (!inserted) {
      report.duplicate_triangles.emplace_back(it->second, kept_original_id[i]);
    }
  }

  // Per undirected edge: incidence count and count of traversals a -> b with
  // a < b.
  std::map<Edge, std::pair<int, int>> edges;
  for (const Triangle& t : kept) {
    for (int c = 0; c < 3; ++c) {
      const int a = t[c];
      const int b = t[(c + 1) % 3];
      auto& [count, forward] = edges[{std::min(a, b), std::max(a, b)}];
      ++count;
      if (a < b) ++forward;
    }
  }
  for (const auto& [edge, stats] : edges) {
    const auto [count, forward] = stats;
    if (count == 1) {
      report.boundary_edges.push_back(edge);
    } else if (count > 2) {
      report.nonmanifold_edges.push_back(edge);
    } else if (forward != 1) {
      report.inconsistent_edges.push_back(edge);
    }
  }

  report.watertight = !kept.empty() && report.boundary_edges.empty() &&
                      report.nonmanifold_edges.empty() &&
                      report.inconsistent_edges.empty();
  mesh.triangles = std::move(kept);
  mesh.watertight = report.watertight;
  return report;
}

TriangleMesh TransformMesh(const TriangleMesh& mesh, const Mat3& rotation,
                           const Vec3& offset) {
  TriangleMesh out = mesh;
  for (Vec3& v : out.vertices) v = rotation * v + offset;
  return out;
}

TriangleMesh MakeCellUnion(const std::vector<std::array<int, 3>>& cells,
                           double cell, const Vec3& origin) {
  const std::set<std::array<int, 3>> occupied(cells.begin(), cells.end());
  std::map<std::array<int, 3>, int> lattice_index;
  TriangleMesh mesh;

  auto vertex = [&](const std::array<int, 3>& p) {
    auto [it, inserted] =
        lattice_index.emplace(p, static_cast<int>(mesh.vertices.size()));
    if (inserted) {
      mesh.vertices.push_back(origin + cell * Vec3(p[0], p[1], p[2]));
    }
    return it->second;
  };

  for (const auto& c : occupied) {
    for (int axis = 0; axis < 3; ++axis) {
      for (int sign : {-1, 1}) {
        std::array<int, 3> neighbor = c;
        neighbor[axis] += sign;
        if (occupied.count(neighbor)) continue;
        const int u = (axis + 1) % 3;
        const int w = (axis + 2) % 3;
        // Quad corners in (u, w); counter-clockwise around +axis.
        const int offsets[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        int quad[4];
        for (int k = 0; k < 4; ++k) {
          std::array<int, 3> p = c;
          p[axis] += sign > 0 ? 1 : 0;
          p[u] += offsets[k][0];
          p[w] += offsets[k][1];
          quad[k] = vertex(p);
        }
        if (sign > 0) {
          mesh.triangles.push_back({quad[0], quad[1], quad[2]});
          mesh.triangles.push_back({quad[0], quad[2], quad[3]});
        } else {
          mesh.triangles.push_back({quad[0], quad[2], quad[1]});
          mesh.triangles.push_back({quad[0], quad[3], quad[2]});
        }
      }
    }
  }
  mesh.watertight = true;
  return mesh;
}

TriangleMesh MakeBox(const Vec3& half_extents) {
  TriangleMesh mesh = MakeCellUnion({{0, 0, 0}}, 2.0, Vec3(-1, -1, -1));
  for (Vec3& v : mesh.vertices) v = v.cwiseProduct(half_extents);
  return mesh;
}

TriangleMesh MakeLShape(double cell) {
  return MakeCellUnion({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, cell,
                       Vec3(-cell, -cell, -0.5 * cell));
}

TriangleMesh MakeIcosphere(double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> vertices = {
      {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
  std::vector<Triangle> triangles = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (Vec3& v : vertices) v.normalize();

  for (int level = 0; level < subdivisions; ++level) {
    std::map<Edge, int> midpoint;
    auto split = [&](int a, int b) {
      const Edge key{std::min(a, b), std::max(a, b)};
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      vertices.push_back((vertices[a] + vertices[b]).normalized());
      const int id = static_cast<int>(vertices.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Triangle> refined;
    refined.reserve(triangles.size() * 4);
    for (const Triangle& f : triangles) {
      const int ab = split(f[0], f[1]);
      const int bc = split(f[1], f[2]);
      const int ca = split(f[2], f[0]);
      refined.push_back({f[0], ab, ca});
      refined.push_back({f[1], bc, ab});
      refined.push_back({f[2], ca, bc});
      refined.push_back({ab, bc, ca});
    }
    triangles = std::move(refined);
  }

  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  for (Vec3& v : mesh.vertices) v *= radius;
  mesh.triangles = std::move(triangles);
  mesh.watertight = true;
  return mesh;
}

TriangleMesh MakeUvSphere(double radius, int slices, int stacks) {
  if (slices < 3 || stacks < 2) {
    throw std::invalid_argument("uv sphere needs slices >= 3, stacks >= 2");
  }
  TriangleMesh mesh;
  mesh.vertices.emplace_back(0.0, 0.0, radius);
  for (int i = 1; i < stacks; ++i) {
    const double polar = M_PI * i / stacks;
    for (int j = 0; j < slices; ++j) {
      const double azimuth = 2.0 * M_PI * j / slices;
      mesh.vertices.emplace_back(radius * std::sin(polar) * std::cos(azimuth),
                                 radius * std::sin(polar) * std::sin(azimuth),
                                 radius * std::cos(polar));
    }
  }
  mesh.vertices.emplace_back(0.0, 0.0, -radius);
  const int north = 0;
  const int south = static_cast<int>(mesh.vertices.size()) - 1;
  auto ring = [&](int i, int j) { return 1 + (i - 1) * slices + j % slices; };

  for (int j = 0; j < slices; ++j) {
    mesh.triangles.push_back({north, ring(1, j), ring(1, j + 1)});
  }
  for (int i = 1; i + 1 < stacks; ++i) {
    for (int j = 0; j < slices; ++j) {
      const int u0 = ring(i, j), u1 = ring(i, j + 1);
      const int l0 = ring(i + 1, j), l1 = ring(i + 1, j + 1);
      mesh.triangles.push_back({u0, l0, l1});
      mesh.triangles.push_back({u0, l1, u1});
    }
  }
  for (int j = 0; j < slices; ++j) {
    mesh.triangles.push_back({ring(stacks - 1, j), south,
                              ring(stacks - 1, j + 1)});
  }
  mesh.watertight = true;
  return mesh;
}

}  // namespace dynbps

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

#ifndef DYNBPS_MESH_IO_H_
#define DYNBPS_MESH_IO_H_

#include <string>
#include <string_view>

#include "dynbps/mesh.h"

namespace dynbps {

// Geometry-only OBJ reader. Honors `v` and `f` records; every other record
// (normals, texture coordinates, groups, materials) is ignored. Polygonal
// faces are fan-triangulated from their first corner, negative indices are
// relative to the vertices read so far. Throws ParseError with the line and
// column of the offending token, or when the file has fewer than 4 vertices
// or 4 triangles. The result is not validated.
TriangleMesh ParseObj(std::string_view text);

// Binary or ASCII STL. ASCII is chosen when the data starts with "solid" and
// parses under the solid/facet grammar. Vertices are merged on exact
// coordinate equality, facet order and count are preserved.
TriangleMesh ParseStl(std::string_view bytes);

// Reads and parses `path` by extension (.obj, .stl; case-insensitive), then
// validates. Throws IoError when the file cannot be read.
TriangleMesh LoadMesh(const std::string& path);

std::string WriteObj(const TriangleMesh& mesh);
std::string WriteBinaryStl(const TriangleMesh& mesh);
std::string WriteAsciiStl(const TriangleMesh& mesh, std::string_view name);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace dynbps

#endif  // DYNBPS_MESH_IO_H_

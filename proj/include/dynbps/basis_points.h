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

#ifndef DYNBPS_BASIS_POINTS_H_
#define DYNBPS_BASIS_POINTS_H_

#include <vector>

#include "dynbps/mesh.h"

namespace dynbps {

inline constexpr int kDefaultPointsPerAxis = 4;
inline constexpr double kDefaultHalfExtent = 0.07;  // meters

// Fixed, ordered basis points. Grid order: x varies fastest, then y, then z,
// so point k = ix + n * (iy + n * iz).
struct BasisPointSet {
  std::vector<Vec3> points;
  int points_per_axis = 0;
  double half_extent = 0.0;

  std::size_t size() const { return points.size(); }
  // Distance between neighbouring grid coordinates, endpoints included.
  double spacing() const { return 2.0 * half_extent / (points_per_axis - 1); }
};

// n^3 points on [-h, h]^3 with both endpoints on every axis. Coordinates are
// h * (2i - (n - 1)) / (n - 1), which makes the grid exactly symmetric about
// the origin. Throws std::invalid_argument for n < 2 or h <= 0.
BasisPointSet MakeGrid(int points_per_axis = kDefaultPointsPerAxis,
                       double half_extent = kDefaultHalfExtent);

// Axis coordinates used by MakeGrid.
std::vector<double> GridCoordinates(int points_per_axis, double half_extent);

}  // namespace dynbps

#endif  // DYNBPS_BASIS_POINTS_H_

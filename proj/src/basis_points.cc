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

#include "dynbps/basis_points.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dynbps {

std::vector<double> GridCoordinates(int points_per_axis, double half_extent) {
  if (points_per_axis < 2) {
    throw std::invalid_argument("grid needs at least 2 points per axis, got " +
                                std::to_string(points_per_axis));
  }
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
    throw std::invalid_argument("grid half extent must be positive");
  }
  const int last = points_per_axis - 1;
  std::vector<double> coords(points_per_axis);
  for (int i = 0; i < points_per_axis; ++i) {
    coords[i] = half_extent * (static_cast<double>(2 * i - last) / last);
  }
  return coords;
}

BasisPointSet MakeGrid(int points_per_axis, double half_extent) {
  const std::vector<double> coords =
      GridCoordinates(points_per_axis, half_extent);
  BasisPointSet bps;
  bps.points_per_axis = points_per_axis;
  bps.half_extent = half_extent;
  bps.points.reserve(coords.size() * coords.size() * coords.size());
  for (double z : coords) {
    for (double y : coords) {
      for (double x : coords) bps.points.emplace_back(x, y, z);
    }
  }
  return bps;
}

}  // namespace dynbps

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

#ifndef DYNBPS_BENCH_H_
#define DYNBPS_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dynbps/basis_points.h"
#include "dynbps/encoder.h"
#include "dynbps/indexed_mesh.h"
#include "dynbps/rotations.h"

namespace dynbps {

struct BenchOptions {
  int poses = 100;
  int threads = 8;
  std::uint64_t seed = 0;
  InteriorPolicy interior = InteriorPolicy::kZero;
  // Random positions are drawn uniformly in a ball of this radius.
  double max_offset = 0.01;
};

struct BenchRun {
  QueryBackend backend = QueryBackend::kBvh;
  int threads = 1;
  double seconds = 0.0;
  double queries_per_second = 0.0;
  std::uint64_t checksum = 0;
};

struct BenchReport {
  std::string mesh_id;
  std::size_t triangles = 0;
  std::size_t queries = 0;
  // Brute force and BVH, each sequential then with BenchOptions::threads.
  std::vector<BenchRun> runs;
  // Sequential brute force time over sequential BVH time.
  double speedup = 0.0;
  bool checksums_match = false;
};

// Haar rotations with positions in a ball, reproducible from `seed`.
std::vector<Pose> RandomPoses(int count, double max_offset, std::uint64_t seed);

// FNV-1a over the bytes of every vector, magnitude and interior flag.
std::uint64_t EncodingChecksum(const std::vector<BpsEncoding>& encodings);

BenchReport RunBench(const BasisPointSet& bps, const IndexedMesh& mesh,
                     const std::string& mesh_id, const BenchOptions& options);

}  // namespace dynbps

#endif  // DYNBPS_BENCH_H_

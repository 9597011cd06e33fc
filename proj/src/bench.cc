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

#include "dynbps/bench.h"

#include <chrono>
#include <cstring>
#include <random>

namespace dynbps {
namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void Mix(std::uint64_t& hash, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= kFnvPrime;
  }
}

}  // namespace

std::vector<Pose> RandomPoses(int count, double max_offset,
                              std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Pose> poses;
  for (int i = 0; i < count; ++i) {
    Pose pose;
    pose.rotation = SampleUniformRotation(rng);
    Vec3 dir(normal(rng), normal(rng), normal(rng));
    if (dir.norm() > 0.0) dir.normalize();
    pose.position = max_offset * std::cbrt(unit(rng)) * dir;
    poses.push_back(pose);
  }
  return poses;
}

std::uint64_t EncodingChecksum(const std::vector<BpsEncoding>& encodings) {
  std::uint64_t hash = kFnvOffset;
  for (const BpsEncoding& e : encodings) {
    for (std::size_t k = 0; k < e.size(); ++k) {
      Mix(hash, e.vectors[k].data(), 3 * sizeof(double));
      Mix(hash, &e.magnitudes[k], sizeof(double));
      const unsigned char flag = e.interior_mask[k] ? 1 : 0;
      Mix(hash, &flag, 1);
    }
  }
  return hash;
}

BenchReport RunBench(const BasisPointSet& bps, const IndexedMesh& mesh,
                     const std::string& mesh_id, const BenchOptions& options) {
  BenchReport report;
  report.mesh_id = mesh_id;
  report.triangles = mesh.mesh().triangles.size();
  report.queries = static_cast<std::size_t>(options.poses) * bps.size();

  const MeshTable table{{mesh_id, mesh}};
  std::vector<PosedMesh> entries;
  for (const Pose& pose :
       RandomPoses(options.poses, options.max_offset, options.seed)) {
    entries.push_back({pose, mesh_id});
  }

  for (QueryBackend backend : {QueryBackend::kBruteForce, QueryBackend::kBvh}) {
    for (int threads : {1, options.threads}) {
      EncodeOptions encode{options.interior, backend};
      const auto start = std::chrono::steady_clock::now();
      const auto encodings = EncodeBatch(bps, entries, table, threads, encode);
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;
      BenchRun run;
      run.backend = backend;
      run.threads = threads;
      run.seconds = elapsed.count();
      run.queries_per_second =
          run.seconds > 0.0 ? report.queries / run.seconds : 0.0;
      run.checksum = EncodingChecksum(encodings);
      report.runs.push_back(run);
    }
  }
  report.speedup = report.runs[2].seconds > 0.0
                       ? report.runs[0].seconds / report.runs[2].seconds
                       : 0.0;
  report.checksums_match = true;
  for (const BenchRun& run : report.runs) {
    report.checksums_match &= run.checksum == report.runs[0].checksum;
  }
  return report;
}

}  // namespace dynbps

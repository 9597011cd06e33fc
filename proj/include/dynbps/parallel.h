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

#ifndef DYNBPS_PARALLEL_H_
#define DYNBPS_PARALLEL_H_

#include <cstddef>
#include <functional>
#include <span>

namespace dynbps {

// Runs body(i) for every i in [0, count) on up to `threads` workers that pull
// chunks of `grain` consecutive indices. Bodies must write to disjoint
// outputs. The first exception thrown by a body is rethrown after all
// workers have joined. threads <= 1 runs inline.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& body,
                 std::size_t grain = 16);

// Sum in a fixed pairwise tree, so the result depends only on the values and
// their order.
double PairwiseSum(std::span<const double> values);

}  // namespace dynbps

#endif  // DYNBPS_PARALLEL_H_

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

#ifndef DYNBPS_ROTATIONS_H_
#define DYNBPS_ROTATIONS_H_

#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dynbps/mesh.h"

namespace dynbps {

// All randomness in the library draws from this engine, seeded by callers.
using Rng = std::mt19937_64;

// Rigid placement of an object: world = rotation * body + position.
struct Pose {
  Vec3 position = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();

  static Pose Identity() { return Pose{}; }
};

// R^T R = I per entry and det(R) = 1, both within `tolerance`.
bool IsRotation(const Mat3& r, double tolerance = 1e-9);

// Throws std::invalid_argument if pose.rotation fails IsRotation or the
// position is not finite.
void ValidatePose(const Pose& pose, double tolerance = 1e-9);

// Nearest rotation in Frobenius norm (polar factor).
Mat3 Orthonormalize(const Mat3& m);

// Angle of R1^T R2 in [0, pi]:
// arccos(clamp((trace(R1^T R2) - 1) / 2, -1, 1)).
double GeodesicDistance(const Mat3& r1, const Mat3& r2);

// Haar-uniform rotation from a unit quaternion of four standard normals.
Mat3 SampleUniformRotation(Rng& rng);

// The 24 rotations with entries in {-1, 0, 1}, sorted lexicographically by
// their row-major entries. The identity is the last element.
std::vector<Eigen::Matrix3i> OctahedralGroup();

// exp([omega]x), Rodrigues.
Mat3 ExpSo3(const Vec3& omega);

// Left-multiplied world-frame increment: position + dx and
// Orthonormalize(ExpSo3(omega) * rotation).
Pose ApplyTangent(const Pose& pose, const Vec3& dx, const Vec3& omega);

// Unit quaternion (w, x, y, z) of a rotation, sign fixed so that the first
// nonzero component is positive. Components below 1e-12 are snapped to zero.
Eigen::Vector4d QuaternionFromRotation(const Mat3& r);

// Rotation of the normalized quaternion (w, x, y, z). Throws
// std::invalid_argument for a zero or non-finite quaternion.
Mat3 RotationFromQuaternion(const Eigen::Vector4d& wxyz);

// Goal orientation of a reorientation task. The relative rotation to the
// goal is expressed in the world frame: RelativeRotation(R) * R = goal.
struct GoalSpec {
  Mat3 goal = Mat3::Identity();

  Mat3 RelativeRotation(const Mat3& current) const {
    return goal * current.transpose();
  }
  double AngleTo(const Mat3& current) const {
    return GeodesicDistance(current, goal);
  }
};

// Rotations S of the octahedral group with S * mesh == mesh: every vertex
// maps within `tolerance` of some vertex. Always contains the identity.
std::vector<Mat3> OctahedralSymmetriesOf(const TriangleMesh& mesh,
                                         double tolerance = 1e-12);

// min over S in `symmetries` of GeodesicDistance(estimate * S, truth). An
// empty group is treated as {identity}.
double SymmetryAwareAngle(const Mat3& estimate, const Mat3& truth,
                          std::span<const Mat3> symmetries);

}  // namespace dynbps

#endif  // DYNBPS_ROTATIONS_H_

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

#include "dynbps/rotations.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace dynbps {

bool IsRotation(const Mat3& r, double tolerance) {
  if (!r.allFinite()) return false;
  const Mat3 gram = r.transpose() * r;
  return (gram - Mat3::Identity()).cwiseAbs().maxCoeff() <= tolerance &&
         std::abs(r.determinant() - 1.0) <= tolerance;
}

void ValidatePose(const Pose& pose, double tolerance) {
  if (!pose.position.allFinite()) {
    throw std::invalid_argument("pose position is not finite");
  }
  if (!IsRotation(pose.rotation, tolerance)) {
    throw std::invalid_argument("pose rotation is not orthonormal with det 1");
  }
}

Mat3 Orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

double GeodesicDistance(const Mat3& r1, const Mat3& r2) {
  const double c = ((r1.transpose() * r2).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Mat3 SampleUniformRotation(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector4d q;
  do {
    for (int i = 0; i < 4; ++i) q[i] = normal(rng);
  } while (q.norm() < 1e-12);
  return RotationFromQuaternion(q);
}

std::vector<Eigen::Matrix3i> OctahedralGroup() {
  std::vector<std::array<int, 9>> flat;
  std::array<int, 3> perm = {0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Eigen::Matrix3i m = Eigen::Matrix3i::Zero();
      for (int row = 0; row < 3; ++row) {
        m(row, perm[row]) = (signs >> row) & 1 ? -1 : 1;
      }
      if (m.determinant() != 1) continue;
      std::array<int, 9> entries;
      for (int i = 0; i < 9; ++i) entries[i] = m(i / 3, i % 3);
      flat.push_back(entries);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(flat.begin(), flat.end());

  std::vector<Eigen::Matrix3i> group;
  group.reserve(flat.size());
  for (const auto& entries : flat) {
    Eigen::Matrix3i m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = entries[i];
    group.push_back(m);
  }
  return group;
}

Mat3 ExpSo3(const Vec3& omega) {
  const double angle = omega.norm();
  if (angle == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, omega / angle).toRotationMatrix();
}

Pose ApplyTangent(const Pose& pose, const Vec3& dx, const Vec3& omega) {
  Pose out;
  out.position = pose.position + dx;
  out.rotation = Orthonormalize(ExpSo3(omega) * pose.rotation);
  return out;
}

Eigen::Vector4d QuaternionFromRotation(const Mat3& r) {
  const Eigen::Quaterniond q(r);
  Eigen::Vector4d wxyz(q.w(), q.x(), q.y(), q.z());
  wxyz.normalize();
  for (int i = 0; i < 4; ++i) {
    if (std::abs(wxyz[i]) < 1e-12) wxyz[i] = 0.0;
  }
  for (int i = 0; i < 4; ++i) {
    if (wxyz[i] != 0.0) {
      if (wxyz[i] < 0.0) wxyz = -wxyz;
      break;
    }
  }
  return wxyz;
}

Mat3 RotationFromQuaternion(const Eigen::Vector4d& wxyz) {
  const double norm = wxyz.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw std::invalid_argument("quaternion must be finite and nonzero");
  }
  const Eigen::Quaterniond q(wxyz[0] / norm, wxyz[1] / norm, wxyz[2] / norm,
                             wxyz[3] / norm);
  return q.toRotationMatrix();
}

std::vector<Mat3> OctahedralSymmetriesOf(const TriangleMesh& mesh,
                                         double tolerance) {
  std::vector<Mat3> symmetries;
  for (const Eigen::Matrix3i& s : OctahedralGroup()) {
    const Mat3 rotation = s.cast<double>();
    bool preserved = true;
    for (const Vec3& v : mesh.vertices) {
      const Vec3 image = rotation * v;
      const bool matched =
          std::any_of(mesh.vertices.begin(), mesh.vertices.end(),
                      [&](const Vec3& w) {
                        return (w - image).cwiseAbs().maxCoeff() <= tolerance;
                      });
      if (!matched) {
        preserved = false;
        break;
      }
    }
    if (preserved) symmetries.push_back(rotation);
  }
  return symmetries;
}

double SymmetryAwareAngle(const Mat3& estimate, const Mat3& truth,
                          std::span<const Mat3> symmetries) {
  if (symmetries.empty()) return GeodesicDistance(estimate, truth);
  double best = std::numeric_limits<double>::infinity();
  for (const Mat3& s : symmetries) {
    best = std::min(best, GeodesicDistance(estimate * s, truth));
  }
  return best;
}

}  // namespace dynbps

// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The fimopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fim {

// Uniform planar array on the x-z plane whose elements can be displaced
// along y within [0, morphing_range]. All lengths are in meters.
struct ArrayConfig {
  int n_x = 1;
  int n_z = 1;
  double spacing_h = 0.0;  // along x
  double spacing_v = 0.0;  // along z
  double wavelength = 0.0;
  double morphing_range = 0.0;  // zeta; 0 is the rigid-array baseline

  int element_count() const { return n_x * n_z; }

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

// Per-element y coordinates, guaranteed to lie in [0, zeta].
class MorphingVector {
 public:
  MorphingVector(Eigen::VectorXd y, double zeta);

  static MorphingVector flat(int elements, double zeta);

  const Eigen::VectorXd& values() const { return y_; }
  double morphing_range() const { return zeta_; }
  Eigen::Index size() const { return y_.size(); }

 private:
  Eigen::VectorXd y_;
  double zeta_;
};

class PositionSet {
 public:
  explicit PositionSet(std::vector<Eigen::Vector3d> positions);

  const std::vector<Eigen::Vector3d>& positions() const { return positions_; }
  const Eigen::Vector3d& position(Eigen::Index n) const { return positions_[static_cast<std::size_t>(n)]; }
  const Eigen::MatrixXd& distances() const { return distances_; }
  double distance(Eigen::Index n, Eigen::Index m) const { return distances_(n, m); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(positions_.size()); }

 private:
  std::vector<Eigen::Vector3d> positions_;
  Eigen::MatrixXd distances_;
};

// Element n (0-based storage index i = n - 1 of the 1-based math index) sits at
//   x = (i mod n_x) * d_h,  y = y_i,  z = floor(i / n_x) * d_v.
PositionSet build_positions(const ArrayConfig& cfg, const MorphingVector& y);

// Same layout without the box check; used by oracles that step outside the
// feasible set. Only the dimension is validated.
PositionSet build_positions_unchecked(const ArrayConfig& cfg, const Eigen::VectorXd& y);

// Elementwise clamp onto [0, zeta].
MorphingVector project_feasible(const Eigen::VectorXd& y_raw, double zeta);

}  // namespace fim

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

#include "fim/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fim {

void ArrayConfig::validate() const {
  if (n_x < 1 || n_z < 1) throw std::invalid_argument("array: n_x and n_z must be >= 1");
  if (!(spacing_h > 0.0) || !(spacing_v > 0.0)) throw std::invalid_argument("array: spacings must be > 0");
  if (!(wavelength > 0.0)) throw std::invalid_argument("array: wavelength must be > 0");
  if (!(morphing_range >= 0.0) || !std::isfinite(morphing_range))
    throw std::invalid_argument("array: morphing range must be finite and >= 0");
}

MorphingVector::MorphingVector(Eigen::VectorXd y, double zeta) : y_(std::move(y)), zeta_(zeta) {
  if (!(zeta >= 0.0)) throw std::invalid_argument("morphing range must be >= 0");
  for (Eigen::Index n = 0; n < y_.size(); ++n) {
    if (!(y_[n] >= 0.0 && y_[n] <= zeta)) {
      throw std::invalid_argument("morphing vector entry " + std::to_string(n) + " = " +
                                  std::to_string(y_[n]) + " outside [0, " + std::to_string(zeta) + "]");
    }
  }
}

MorphingVector MorphingVector::flat(int elements, double zeta) {
  return MorphingVector(Eigen::VectorXd::Zero(elements), zeta);
}

PositionSet::PositionSet(std::vector<Eigen::Vector3d> positions) : positions_(std::move(positions)) {
  const auto n = static_cast<Eigen::Index>(positions_.size());
  distances_.setZero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double d = (positions_[a] - positions_[b]).norm();
      distances_(a, b) = d;
      distances_(b, a) = d;
    }
  }
}

PositionSet build_positions_unchecked(const ArrayConfig& cfg, const Eigen::VectorXd& y) {
  cfg.validate();
  const int n = cfg.element_count();
  if (y.size() != n) {
    throw std::invalid_argument("morphing vector has " + std::to_string(y.size()) + " entries, array has " +
                                std::to_string(n) + " elements");
  }
  std::vector<Eigen::Vector3d> pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    pos[static_cast<std::size_t>(i)] = {(i % cfg.n_x) * cfg.spacing_h, y[i], (i / cfg.n_x) * cfg.spacing_v};
  }
  return PositionSet(std::move(pos));
}

PositionSet build_positions(const ArrayConfig& cfg, const MorphingVector& y) {
  const auto& v = y.values();
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    if (!(v[n] >= 0.0 && v[n] <= cfg.morphing_range)) {
      throw std::invalid_argument("morphing vector entry " + std::to_string(n) + " infeasible for zeta = " +
                                  std::to_string(cfg.morphing_range));
    }
  }
  return build_positions_unchecked(cfg, v);
}

MorphingVector project_feasible(const Eigen::VectorXd& y_raw, double zeta) {
  Eigen::VectorXd y = y_raw.cwiseMax(0.0).cwiseMin(zeta);
  return MorphingVector(std::move(y), zeta);
}

}  // namespace fim

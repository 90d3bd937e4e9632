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

#include "fim/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fim {

GaussLegendreRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

Eigen::Vector3d wave_vector(double elevation, double azimuth, double wavelength, FrontHalfSpace half_space) {
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double ct = std::cos(elevation);
  if (half_space == FrontHalfSpace::kSurfaceNormal) {
    return k * Eigen::Vector3d(ct * std::sin(azimuth), ct * std::cos(azimuth), std::sin(elevation));
  }
  return k * Eigen::Vector3d(ct * std::cos(azimuth), ct * std::sin(azimuth), std::sin(elevation));
}

std::complex<double> correlation_quadrature(const Eigen::Vector3d& delta_u, double wavelength, int order,
                                            FrontHalfSpace half_space) {
  if (order < 8) throw std::invalid_argument("correlation quadrature needs order >= 8");
  const GaussLegendreRule rule = gauss_legendre(order);
  const double half = std::numbers::pi / 2.0;
  std::complex<double> acc = 0.0;
  for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
    const double t = half * rule.nodes[a];
    const double wt = half * rule.weights[a] * std::cos(t) / (2.0 * std::numbers::pi);
    std::complex<double> inner = 0.0;
    for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
      const double p = half * rule.nodes[b];
      const double phase = wave_vector(t, p, wavelength, half_space).dot(delta_u);
      inner += half * rule.weights[b] * std::polar(1.0, phase);
    }
    acc += wt * inner;
  }
  return acc;
}

}  // namespace fim

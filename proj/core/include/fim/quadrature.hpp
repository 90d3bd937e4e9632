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
#include <complex>
#include <vector>

namespace fim {

// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int order);

// Which half-space of arrival directions the quadrature averages over.
//
// kSurfaceNormal: directions in front of the x-z surface (+y side). The
//   azimuth is measured from the surface normal, k = 2pi/lambda *
//   [cos(t) sin(p), cos(t) cos(p), sin(t)].
// kLiteralAzimuth: k = 2pi/lambda * [cos(t) cos(p), cos(t) sin(p), sin(t)]
//   with the same angular domain, which covers the +x half-space instead.
enum class FrontHalfSpace { kSurfaceNormal, kLiteralAzimuth };

// Wave vector for elevation t and azimuth p.
Eigen::Vector3d wave_vector(double elevation, double azimuth, double wavelength,
                            FrontHalfSpace half_space = FrontHalfSpace::kSurfaceNormal);

// E{exp(j k^T du)} under the density cos(t) / (2 pi) on [-pi/2, pi/2]^2,
// evaluated with an order x order tensor Gauss-Legendre rule. order >= 8.
std::complex<double> correlation_quadrature(const Eigen::Vector3d& delta_u, double wavelength, int order,
                                            FrontHalfSpace half_space = FrontHalfSpace::kSurfaceNormal);

}  // namespace fim

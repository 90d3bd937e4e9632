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
#include <span>
#include <vector>

#include "fim/geometry.hpp"

namespace fim {

// Unnormalized sinc, sin(x)/x, with sinc(0) = 1.
double sinc(double x);

// d/dx sinc(x) = cos(x)/x - sin(x)/x^2, with value 0 at x = 0.
double sinc_derivative(double x);

// Normalized spatial correlation under isotropic scattering:
//   [R]_{nm} = sinc(2 pi ||u_n - u_m|| / lambda).
Eigen::MatrixXd correlation_matrix(const PositionSet& pos, double wavelength);

// Derivative of the correlation matrix with respect to y_n. The matrix is
// symmetric and nonzero only in row n and column n, so it is stored as the
// single vector row[m] = d[R]_{nm}/dy_n (row[n] = 0).
struct CorrelationDerivative {
  Eigen::Index element = 0;
  Eigen::VectorXd row;

  Eigen::MatrixXd dense() const;

  // tr(G * dR/dy_n) = G.col(n).dot(row) + G.row(n).dot(row).
  double trace_product(const Eigen::MatrixXd& g) const;
};

// Throws std::invalid_argument when element n coincides with another element.
CorrelationDerivative correlation_derivative(const PositionSet& pos, Eigen::Index n, double wavelength);

// All derivative rows at once: entry (n, m) = d[R]_{nm}/dy_n.
Eigen::MatrixXd correlation_derivative_rows(const PositionSet& pos, double wavelength);

struct CorrelationSet {
  Eigen::MatrixXd r_fim;
  std::vector<Eigen::MatrixXd> r_users;  // R_k = A * mu_k * R_fim
  double element_area = 0.0;
  std::vector<double> attenuation;  // mu_k, linear

  int users() const { return static_cast<int>(r_users.size()); }
  double user_scale(int k) const { return element_area * attenuation[static_cast<std::size_t>(k)]; }
};

CorrelationSet scale_user_covariances(Eigen::MatrixXd r_fim, double element_area, std::span<const double> attenuation);

}  // namespace fim

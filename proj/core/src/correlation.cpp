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

#include "fim/correlation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fim {

namespace {
constexpr double kSeriesThreshold = 1e-6;
}

double sinc(double x) {
  if (std::abs(x) < kSeriesThreshold) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double sinc_derivative(double x) {
  if (std::abs(x) < kSeriesThreshold) return -x / 3.0;
  return std::cos(x) / x - std::sin(x) / (x * x);
}

Eigen::MatrixXd correlation_matrix(const PositionSet& pos, double wavelength) {
  const Eigen::Index n = pos.size();
  const double k = 2.0 * std::numbers::pi / wavelength;
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    r(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double v = sinc(k * pos.distance(a, b));
      r(a, b) = v;
      r(b, a) = v;
    }
  }
  return r;
}

Eigen::MatrixXd CorrelationDerivative::dense() const {
  const Eigen::Index n = row.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  d.row(element) = row.transpose();
  d.col(element) = row;
  return d;
}

double CorrelationDerivative::trace_product(const Eigen::MatrixXd& g) const {
  return g.col(element).dot(row) + g.row(element).dot(row);
}

CorrelationDerivative correlation_derivative(const PositionSet& pos, Eigen::Index n, double wavelength) {
  if (n < 0 || n >= pos.size()) throw std::invalid_argument("element index out of range");
  const double k = 2.0 * std::numbers::pi / wavelength;
  CorrelationDerivative out;
  out.element = n;
  out.row = Eigen::VectorXd::Zero(pos.size());
  const double yn = pos.position(n).y();
  for (Eigen::Index m = 0; m < pos.size(); ++m) {
    if (m == n) continue;
    const double d = pos.distance(n, m);
    if (!(d > 0.0)) {
      throw std::invalid_argument("elements " + std::to_string(n) + " and " + std::to_string(m) + " coincide");
    }
    // chain rule: d sinc(k d)/dy_n = sinc'(k d) * k * (y_n - y_m) / d
    out.row[m] = sinc_derivative(k * d) * k * (yn - pos.position(m).y()) / d;
  }
  return out;
}

Eigen::MatrixXd correlation_derivative_rows(const PositionSet& pos, double wavelength) {
  const Eigen::Index n = pos.size();
  Eigen::MatrixXd rows(n, n);
  for (Eigen::Index a = 0; a < n; ++a) rows.row(a) = correlation_derivative(pos, a, wavelength).row.transpose();
  return rows;
}

CorrelationSet scale_user_covariances(Eigen::MatrixXd r_fim, double element_area, std::span<const double> attenuation) {
  if (!(element_area > 0.0)) throw std::invalid_argument("element area must be > 0");
  CorrelationSet set;
  set.element_area = element_area;
  set.attenuation.assign(attenuation.begin(), attenuation.end());
  set.r_users.reserve(attenuation.size());
  for (std::size_t k = 0; k < attenuation.size(); ++k) {
    if (!(attenuation[k] > 0.0)) throw std::invalid_argument("attenuation of user " + std::to_string(k) + " must be > 0");
    set.r_users.push_back(element_area * attenuation[k] * r_fim);
  }
  set.r_fim = std::move(r_fim);
  return set;
}

}  // namespace fim

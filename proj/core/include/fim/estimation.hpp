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

#include "fim/correlation.hpp"

namespace fim {

// Uplink training with mutually orthogonal pilots. After de-spreading, the
// observation for user k is r_k = h_k + z_k with z_k ~ CN(0, noise_regularizer() I),
// so the pilot sequences themselves are never formed.
struct PilotConfig {
  int tau = 1;            // pilot length (channel uses)
  double p_train = 0.0;   // per-symbol pilot power (W)
  double sigma2 = 0.0;    // noise power (W)
  int tau_c = 200;        // coherence block length (channel uses)

  double noise_regularizer() const { return sigma2 / (tau * p_train); }

  void validate(int users) const;
};

struct UserEstimation {
  Eigen::MatrixXd q;    // (R_k + c I)^{-1}
  Eigen::MatrixXd psi;  // R_k Q_k R_k
  Eigen::MatrixXd mse;  // R_k - Psi_k
};

struct EstimationStats {
  std::vector<UserEstimation> users;
  Eigen::MatrixXd psi_sum;
};

// Q = (R + c I)^{-1} through a Cholesky factorization. A zero regularizer is
// accepted when R itself is positive definite. Throws NumericalError if the
// factorization fails.
Eigen::MatrixXd precision_matrix(const Eigen::MatrixXd& r, double regularizer);
Eigen::MatrixXd precision_matrix(const Eigen::MatrixXd& r, const PilotConfig& pilot);

Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& r, const Eigen::MatrixXd& q);

Eigen::MatrixXd mse_matrix(const Eigen::MatrixXd& r, const Eigen::MatrixXd& psi);

// h_hat = R Q r.
Eigen::VectorXcd mmse_estimate(const Eigen::VectorXcd& observed, const Eigen::MatrixXd& r, const Eigen::MatrixXd& q);

EstimationStats estimate_statistics(const CorrelationSet& corr, const PilotConfig& pilot);

}  // namespace fim

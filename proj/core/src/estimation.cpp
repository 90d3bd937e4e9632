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

#include "fim/estimation.hpp"

#include <stdexcept>
#include <string>

#include "fim/errors.hpp"

namespace fim {

void PilotConfig::validate(int users) const {
  if (tau < users) throw std::invalid_argument("pilot length tau must be >= number of users");
  if (tau >= tau_c) throw std::invalid_argument("pilot length tau must be < coherence block tau_c");
  if (!(p_train > 0.0)) throw std::invalid_argument("pilot power must be > 0");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("noise power must be > 0");
}

Eigen::MatrixXd precision_matrix(const Eigen::MatrixXd& r, double regularizer) {
  if (r.rows() != r.cols()) throw std::invalid_argument("covariance must be square");
  if (!(regularizer >= 0.0)) throw std::invalid_argument("regularizer must be >= 0");
  const Eigen::Index n = r.rows();
  Eigen::MatrixXd a = r;
  a.diagonal().array() += regularizer;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization of R + cI failed (c = " + std::to_string(regularizer) + ")");
  }
  Eigen::MatrixXd q = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return 0.5 * (q + q.transpose());
}

Eigen::MatrixXd precision_matrix(const Eigen::MatrixXd& r, const PilotConfig& pilot) {
  return precision_matrix(r, pilot.noise_regularizer());
}

Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& r, const Eigen::MatrixXd& q) {
  Eigen::MatrixXd psi = r * q * r;
  return 0.5 * (psi + psi.transpose());
}

Eigen::MatrixXd mse_matrix(const Eigen::MatrixXd& r, const Eigen::MatrixXd& psi) { return r - psi; }

Eigen::VectorXcd mmse_estimate(const Eigen::VectorXcd& observed, const Eigen::MatrixXd& r, const Eigen::MatrixXd& q) {
  if (observed.size() != r.rows() || q.rows() != r.rows()) {
    throw std::invalid_argument("mmse_estimate: dimension mismatch");
  }
  const Eigen::MatrixXd rq = r * q;
  return rq.cast<std::complex<double>>() * observed;
}

EstimationStats estimate_statistics(const CorrelationSet& corr, const PilotConfig& pilot) {
  EstimationStats stats;
  const Eigen::Index n = corr.r_fim.rows();
  stats.psi_sum = Eigen::MatrixXd::Zero(n, n);
  stats.users.reserve(corr.r_users.size());
  for (const auto& r : corr.r_users) {
    UserEstimation u;
    u.q = precision_matrix(r, pilot);
    u.psi = estimate_covariance(r, u.q);
    u.mse = mse_matrix(r, u.psi);
    stats.psi_sum += u.psi;
    stats.users.push_back(std::move(u));
  }
  return stats;
}

}  // namespace fim

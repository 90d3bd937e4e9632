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

#include "fim/spectral_efficiency.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fim/errors.hpp"

namespace fim {

SystemParams SystemParams::from_coherence(double total_power, double sigma2, int users, int tau_c, int tau,
                                          InterferenceForm form) {
  SystemParams p;
  p.total_power = total_power;
  p.sigma2 = sigma2;
  p.users = users;
  p.prelog = static_cast<double>(tau_c - tau) / static_cast<double>(tau_c);
  p.form = form;
  p.validate();
  return p;
}

void SystemParams::validate() const {
  if (!(total_power > 0.0)) throw std::invalid_argument("total power must be > 0");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("noise power must be >= 0");
  if (users < 1) throw std::invalid_argument("need at least one user");
  if (!(prelog > 0.0 && prelog < 1.0)) throw std::invalid_argument("prelog must lie in (0, 1)");
}

double signal_power(const Eigen::MatrixXd& psi) {
  const double t = psi.trace();
  return t * t;
}

double interference_power(const Eigen::MatrixXd& r_k, const Eigen::MatrixXd& psi_k, const Eigen::MatrixXd& psi_sum,
                          const SystemParams& sys) {
  // tr(A B) for symmetric A, B is the sum of the elementwise product.
  double value = r_k.cwiseProduct(psi_sum).sum() + sys.sigma2 / sys.total_power * psi_sum.trace();
  if (sys.form == InterferenceForm::kCompressed) value -= psi_k.squaredNorm();
  if (!(value > 0.0)) {
    throw NumericalError("interference-plus-noise term is not positive: " + std::to_string(value));
  }
  return value;
}

double normalization_eta(const Eigen::MatrixXd& psi_sum, int users) {
  const double t = psi_sum.trace();
  if (!(t > 0.0)) throw NumericalError("normalization undefined: tr(Psi_sum) = " + std::to_string(t));
  return users / t;
}

SeBreakdown sum_se(std::span<const double> signal, std::span<const double> interference, double eta, double prelog) {
  if (signal.size() != interference.size()) throw std::invalid_argument("sum_se: size mismatch");
  SeBreakdown out;
  out.eta = eta;
  double acc = 0.0;
  for (std::size_t k = 0; k < signal.size(); ++k) {
    if (!(interference[k] > 0.0)) throw NumericalError("interference of user " + std::to_string(k) + " not positive");
    UserSe u{signal[k], interference[k], signal[k] / interference[k]};
    acc += std::log1p(u.sinr);
    out.users.push_back(u);
  }
  out.se_nats = prelog * acc;
  out.se_bits = out.se_nats / std::numbers::ln2;
  return out;
}

SeBreakdown evaluate_se(const CorrelationSet& corr, const EstimationStats& est, const SystemParams& sys) {
  const auto k_users = corr.r_users.size();
  if (est.users.size() != k_users) throw std::invalid_argument("evaluate_se: user count mismatch");
  std::vector<double> s(k_users);
  std::vector<double> i(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    s[k] = signal_power(est.users[k].psi);
    i[k] = interference_power(corr.r_users[k], est.users[k].psi, est.psi_sum, sys);
  }
  return sum_se(s, i, normalization_eta(est.psi_sum, static_cast<int>(k_users)), sys.prelog);
}

}  // namespace fim

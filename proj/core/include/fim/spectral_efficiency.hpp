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

#include "fim/correlation.hpp"
#include "fim/estimation.hpp"

namespace fim {

// Closed form used for the UaTF interference-plus-noise term with MRT on the
// MMSE estimate:
//   kExact:      I_k = tr(R_k Psi_sum) + (s2/P) tr(Psi_sum)
//   kCompressed: I_k = tr(R_k Psi_sum) - tr(Psi_k^2) + (s2/P) tr(Psi_sum)
// kExact equals the expectation E|h_k^H h_hat_k - E{.}|^2 + sum_{i!=k} E|h_k^H h_hat_i|^2
// + K s2 / (P eta) for Gaussian channels; the Monte Carlo oracle confirms it.
// kCompressed drops the tr(Psi_k^2) fourth-moment contribution of the
// self-interference variance and is kept for comparison.
enum class InterferenceForm { kExact, kCompressed };

struct SystemParams {
  double total_power = 0.0;  // P (W)
  double sigma2 = 0.0;       // noise power (W)
  int users = 1;             // K
  double prelog = 1.0;       // (tau_c - tau) / tau_c
  InterferenceForm form = InterferenceForm::kExact;

  static SystemParams from_coherence(double total_power, double sigma2, int users, int tau_c, int tau,
                                     InterferenceForm form = InterferenceForm::kExact);
  void validate() const;
};

struct UserSe {
  double signal = 0.0;        // S_k
  double interference = 0.0;  // I_k
  double sinr = 0.0;          // gamma_k
};

struct SeBreakdown {
  std::vector<UserSe> users;
  double se_nats = 0.0;
  double se_bits = 0.0;
  double eta = 0.0;
};

// S_k = tr(Psi_k)^2.
double signal_power(const Eigen::MatrixXd& psi);

// Throws NumericalError when the result is not strictly positive.
double interference_power(const Eigen::MatrixXd& r_k, const Eigen::MatrixXd& psi_k, const Eigen::MatrixXd& psi_sum,
                          const SystemParams& sys);

// eta = K / tr(Psi_sum), so that K s2 / (P eta) = (s2/P) tr(Psi_sum).
double normalization_eta(const Eigen::MatrixXd& psi_sum, int users);

SeBreakdown sum_se(std::span<const double> signal, std::span<const double> interference, double eta, double prelog);

SeBreakdown evaluate_se(const CorrelationSet& corr, const EstimationStats& est, const SystemParams& sys);

}  // namespace fim

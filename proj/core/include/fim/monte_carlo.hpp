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
#include <cstdint>
#include <vector>

#include "fim/correlation.hpp"
#include "fim/estimation.hpp"
#include "fim/problem.hpp"
#include "fim/quadrature.hpp"
#include "fim/rng.hpp"
#include "fim/spectral_efficiency.hpp"

namespace fim {

struct McConfig {
  int realizations = 20000;
  std::uint64_t seed = 1;
  int batches = 20;  // independent RNG streams; also the batch-means groups for standard errors
  int threads = 1;

  void validate() const;
};

// Draws h ~ CN(0, R) as h = F w with F F^T = R. F is the symmetric square
// root from an eigendecomposition; eigenvalues in [-1e-8 lambda_max, 0) are
// treated as zero and anything more negative raises NumericalError.
class ChannelSampler {
 public:
  explicit ChannelSampler(const Eigen::MatrixXd& covariance);

  Eigen::VectorXcd sample(Rng& rng) const;
  const Eigen::MatrixXd& factor() const { return factor_; }

 private:
  Eigen::MatrixXd factor_;
};

Eigen::VectorXcd sample_channel(const ChannelSampler& sampler, Rng& rng);

// De-spread training observation r = h + z, z ~ CN(0, sigma2 / (tau p_train) I).
// sigma2 = 0 gives r = h.
Eigen::VectorXcd simulate_training(const Eigen::VectorXcd& h, const PilotConfig& pilot, Rng& rng);

// Finite sum of `paths` plane waves with CN(0, gain) amplitudes and arrival
// directions drawn from cos(t)/(2pi); approaches CN(0, gain * R) as paths grows.
Eigen::VectorXcd sample_plane_wave_channel(const PositionSet& pos, double wavelength, double gain, int paths, Rng& rng,
                                           FrontHalfSpace half_space = FrontHalfSpace::kSurfaceNormal);

struct McStat {
  double value = 0.0;
  double std_error = 0.0;

  double relative_error() const { return value != 0.0 ? std_error / std::abs(value) : 0.0; }
};

struct McUserEstimates {
  Eigen::MatrixXcd psi;          // E{h_hat h_hat^H}
  Eigen::MatrixXcd mse;          // E{(h - h_hat)(h - h_hat)^H}
  Eigen::MatrixXcd channel_cov;  // E{h h^H}
  Eigen::MatrixXcd cross_cov;    // E{(h - h_hat) h_hat^H}
  McStat signal;                 // |E{h_k^H h_hat_k}|^2
  McStat self_variance;          // Var(h_k^H h_hat_k)
  McStat cross_interference;     // sum_{i != k} E|h_k^H h_hat_i|^2
  McStat interference;           // self_variance + cross_interference + K s2 / (P eta)
  McStat sinr;
};

struct McEstimates {
  int realizations = 0;
  std::vector<McUserEstimates> users;
  McStat mean_trace_ff;  // E{tr(F F^H)} with F = [h_hat_1 ... h_hat_K]
  McStat eta;
  McStat se_nats;

  // True when any reported standard error exceeds half of `tolerance`
  // relative to its estimate.
  bool undersampled(double tolerance) const;
};

McEstimates estimate_uatf_terms(const CorrelationSet& corr, const PilotConfig& pilot, const SystemParams& sys,
                                const McConfig& cfg);

McEstimates estimate_uatf_terms(const FimProblem& problem, const Eigen::VectorXd& y, const McConfig& cfg);

// ||A - B||_F / ||B||_F for a complex empirical matrix against a real closed form.
double relative_frobenius_error(const Eigen::MatrixXcd& empirical, const Eigen::MatrixXd& reference);

}  // namespace fim

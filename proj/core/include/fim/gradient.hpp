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
#include <functional>
#include <vector>

#include "fim/problem.hpp"

namespace fim {

// Cached matrices for the closed-form gradient at one morphing vector:
//   C_k     = Q_k R_k - Q_k R_k^2 Q_k + R_k Q_k
//   D_{k,i} = Q_i R_i R_k - Q_i R_i R_k R_i Q_i + R_k R_i Q_i
//   E_k     = Q_k R_k Psi_k - Q_k R_k Psi_k R_k Q_k + Psi_k R_k Q_k
// Each has the shape T X + X T^T - T X T^T with T = Q R, which is how they
// are built.
struct GradientWorkspace {
  std::uint64_t fingerprint = 0;
  Eigen::VectorXd y;
  Evaluation evaluation;
  Eigen::MatrixXd derivative_rows;  // (n, m) = d[R_fim]_{nm}/dy_n
  std::vector<Eigen::MatrixXd> c;
  std::vector<std::vector<Eigen::MatrixXd>> d;  // d[k][i]
  std::vector<Eigen::MatrixXd> e;
  SystemParams system;
  double element_area = 0.0;
  std::vector<double> attenuation;
};

std::uint64_t morphing_fingerprint(const Eigen::VectorXd& y);

GradientWorkspace build_workspace(const FimProblem& problem, const Eigen::VectorXd& y);

// Per-term gradients. `y` is the caller's current iterate; a mismatch with the
// workspace raises StaleWorkspaceError. Each call costs O(N) (K = users for
// the interference term).
double grad_signal(const GradientWorkspace& ws, int k, Eigen::Index n, const Eigen::VectorXd& y);
double grad_interference(const GradientWorkspace& ws, int k, Eigen::Index n, const Eigen::VectorXd& y);

// Quotient rule over users, scaled by the prelog, assembled from the per-term
// gradients.
Eigen::VectorXd grad_sum_se(const GradientWorkspace& ws, const Eigen::VectorXd& y);

// Same gradient without materializing D_{k,i}: the user sums are folded into
// one matrix G so that grad_n = tr(G dR/dy_n). O(K N^3) per call.
Eigen::VectorXd sum_se_gradient(const FimProblem& problem, const Eigen::VectorXd& y);

// Central differences (f(y + h e_n) - f(y - h e_n)) / 2h of an unconstrained
// objective.
Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& objective,
                                           const Eigen::VectorXd& y, double h);

}  // namespace fim

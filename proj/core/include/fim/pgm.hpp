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
#include <iosfwd>
#include <string>
#include <vector>

#include "fim/problem.hpp"

namespace fim {

// Projected gradient ascent on the box [0, zeta]^N with Armijo backtracking.
struct PgmConfig {
  double initial_step = 0.0;          // kappa_0
  double shrink = 0.5;                // beta
  double sufficient_increase = 1e-4;  // c_1
  int max_iterations = 500;
  double objective_tolerance = 1e-15;  // relative objective change
  int objective_patience = 3;          // consecutive iterations below objective_tolerance
  double mapping_tolerance = 1e-6;     // projected-gradient (KKT) residual
  double min_step = 0.0;               // kappa_min
  int restarts = 1;
  std::uint64_t seed = 0;
  int history_stride = 1;  // keep every n-th iterate (0 keeps none)

  // Defaults scaled to the carrier wavelength: kappa_0 = lambda/10, kappa_min = 1e-12 lambda.
  static PgmConfig defaults_for(double wavelength);
  void validate() const;
};

enum class Termination { kObjectiveTolerance, kGradientMapping, kMaxIterations, kLineSearchStall };

const char* to_string(Termination t);

struct PgmTrajectory {
  std::vector<Eigen::VectorXd> iterates;  // thinned by history_stride; iterate 0 always kept when stride > 0
  std::vector<int> iterate_index;
  std::vector<double> objective;  // objective[j] at iterate j (j = 0 is the start)
  std::vector<double> steps;      // accepted step per iteration (index j - 1)
  std::vector<double> mapping_norms;  // ||y_j - y_{j-1}|| / kappa_j
  std::vector<double> kkt_residuals;  // projected-gradient inf-norm at y_j
  std::vector<int> backtracks;
  Termination termination = Termination::kMaxIterations;
  double wall_seconds = 0.0;

  int iterations() const { return static_cast<int>(steps.size()); }
};

struct PgmResult {
  Eigen::VectorXd y_opt;
  double objective = 0.0;
  PgmTrajectory trajectory;
};

struct ArmijoResult {
  bool accepted = false;
  double step = 0.0;
  Eigen::VectorXd y_next;
  double objective_next = 0.0;
  int backtracks = 0;
};

// Elementwise max violation of the box KKT conditions for maximization:
// interior |g_n|, at 0 max(g_n, 0), at zeta max(-g_n, 0).
double kkt_residual(const Eigen::VectorXd& y, const Eigen::VectorXd& grad, double zeta);

// Backtracks from trial_step until
//   f(y+) >= f(y) + c1 <grad, y+ - y>,  y+ = Pi(y + kappa grad).
ArmijoResult armijo_step(const ObjectiveFunctions& objective, const Eigen::VectorXd& y, double value,
                         const Eigen::VectorXd& grad, double zeta, double trial_step, const PgmConfig& cfg);

// Throws NumericalError on a non-finite objective or gradient.
PgmResult optimize(const ObjectiveFunctions& objective, const Eigen::VectorXd& y0, double zeta, const PgmConfig& cfg);

// Starts from a uniform random point in [0, zeta]^N drawn from stream 0 of cfg.seed.
PgmResult optimize(const ObjectiveFunctions& objective, Eigen::Index elements, double zeta, const PgmConfig& cfg);

Eigen::VectorXd random_start(Eigen::Index elements, double zeta, std::uint64_t seed, std::uint64_t stream);

struct RunSummary {
  int start_index = 0;
  double objective = 0.0;
  int iterations = 0;
  Termination termination = Termination::kMaxIterations;
};

struct MultiStartResult {
  PgmResult best;
  int best_index = 0;
  std::vector<RunSummary> runs;
};

// Runs the explicit starts first, then cfg.restarts random starts (stream r
// of cfg.seed for restart r). Ties go to the lowest run index.
MultiStartResult multi_start(const ObjectiveFunctions& objective, Eigen::Index elements, double zeta,
                             const PgmConfig& cfg, const std::vector<Eigen::VectorXd>& explicit_starts = {});

// iteration,se_nats,se_bits,step,grad_map_norm
void write_trajectory_csv(const PgmTrajectory& trajectory, std::ostream& out);

}  // namespace fim

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
#include <functional>
#include <vector>

#include "fim/correlation.hpp"
#include "fim/estimation.hpp"
#include "fim/geometry.hpp"
#include "fim/spectral_efficiency.hpp"

namespace fim {

// Everything the sum-SE objective depends on except the morphing vector.
struct FimProblem {
  ArrayConfig array;
  double element_area = 0.0;        // A (m^2)
  std::vector<double> attenuation;  // mu_k, linear
  PilotConfig pilot;
  SystemParams system;

  int users() const { return static_cast<int>(attenuation.size()); }
  int elements() const { return array.element_count(); }
  void validate() const;
};

struct Evaluation {
  CorrelationSet correlation;
  EstimationStats estimation;
  SeBreakdown se;
};

// Full closed-form pipeline at y. y is not required to be feasible.
Evaluation evaluate(const FimProblem& problem, const Eigen::VectorXd& y);

double sum_se_value(const FimProblem& problem, const Eigen::VectorXd& y);

// Smooth objective with gradient, as consumed by the optimizer.
struct ObjectiveFunctions {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

ObjectiveFunctions make_objective(const FimProblem& problem);

}  // namespace fim

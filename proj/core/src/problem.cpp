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

#include "fim/problem.hpp"

#include <stdexcept>

#include "fim/gradient.hpp"

namespace fim {

void FimProblem::validate() const {
  array.validate();
  if (!(element_area > 0.0)) throw std::invalid_argument("element area must be > 0");
  if (attenuation.empty()) throw std::invalid_argument("need at least one user");
  if (system.users != users()) throw std::invalid_argument("system user count disagrees with attenuation list");
  pilot.validate(users());
  system.validate();
}

Evaluation evaluate(const FimProblem& problem, const Eigen::VectorXd& y) {
  const PositionSet pos = build_positions_unchecked(problem.array, y);
  Evaluation ev;
  ev.correlation = scale_user_covariances(correlation_matrix(pos, problem.array.wavelength), problem.element_area,
                                          problem.attenuation);
  ev.estimation = estimate_statistics(ev.correlation, problem.pilot);
  ev.se = evaluate_se(ev.correlation, ev.estimation, problem.system);
  return ev;
}

double sum_se_value(const FimProblem& problem, const Eigen::VectorXd& y) { return evaluate(problem, y).se.se_nats; }

ObjectiveFunctions make_objective(const FimProblem& problem) {
  return {
      [problem](const Eigen::VectorXd& y) { return sum_se_value(problem, y); },
      [problem](const Eigen::VectorXd& y) { return sum_se_gradient(problem, y); },
  };
}

}  // namespace fim

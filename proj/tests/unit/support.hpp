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

#include "fim/problem.hpp"
#include "fim/rng.hpp"
#include "fim/scenario.hpp"

namespace fim::testing {

// Small problem on an n_x x n_z grid with users dropped from `seed`.
inline FimProblem small_problem(int n_x, int n_z, int users, std::uint64_t seed = 5, double spacing_lambdas = 0.25,
                                double zeta_lambdas = 0.5) {
  ScenarioConfig sc = ScenarioConfig::reference();
  const double lambda = sc.wavelength();
  sc.n_x = n_x;
  sc.n_z = n_z;
  sc.users = users;
  sc.spacing_h = sc.spacing_v = spacing_lambdas * lambda;
  sc.morphing_range = zeta_lambdas * lambda;
  Rng rng = make_rng(seed, 0);
  return make_problem(sc, drop_users(sc, rng));
}

inline Eigen::VectorXd random_feasible(Eigen::Index n, double zeta, std::uint64_t seed) {
  Rng rng = make_rng(seed, 99);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = zeta * uniform01(rng);
  return y;
}

inline Eigen::MatrixXd random_psd(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed, 7);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = uniform01(rng) - 0.5;
  return a * a.transpose();
}

}  // namespace fim::testing

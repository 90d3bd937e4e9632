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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fim/errors.hpp"
#include "fim/spectral_efficiency.hpp"
#include "support.hpp"

namespace fim {
namespace {

SystemParams params(double p, double s2, int k, InterferenceForm form = InterferenceForm::kExact) {
  return SystemParams::from_coherence(p, s2, k, 200, k, form);
}

TEST(Signal, TraceSquared) {
  EXPECT_DOUBLE_EQ(signal_power(Eigen::MatrixXd::Identity(5, 5)), 25.0);
  EXPECT_EQ(signal_power(Eigen::MatrixXd::Zero(5, 5)), 0.0);
}

TEST(Interference, PerfectSingleUser) {
  const int n = 6;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const double s2_over_p = 0.01;
  // The compressed closed form leaves only the scaled noise ...
  EXPECT_NEAR(interference_power(eye, eye, eye, params(1.0, s2_over_p, 1, InterferenceForm::kCompressed)),
              s2_over_p * n, 1e-14);
  // ... while the exact expectation keeps the self-interference variance tr(R Psi).
  EXPECT_NEAR(interference_power(eye, eye, eye, params(1.0, s2_over_p, 1)), n + s2_over_p * n, 1e-12);
}

TEST(Interference, HighPowerFloor) {
  const Eigen::MatrixXd r = testing::random_psd(5, 1) + Eigen::MatrixXd::Identity(5, 5);
  const Eigen::MatrixXd psi = r * 0.8;
  const double floor = (r * psi).trace();
  EXPECT_NEAR(interference_power(r, psi, psi, params(1e12, 1.0, 1)), floor, 1e-9 * floor);
}

TEST(Interference, NonpositiveIsReported) {
  const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_THROW(interference_power(z, z, z, params(1.0, 0.0, 1)), NumericalError);
}

TEST(Eta, Normalization) {
  EXPECT_DOUBLE_EQ(normalization_eta(Eigen::MatrixXd::Identity(8, 8), 1), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(normalization_eta(Eigen::MatrixXd::Identity(3, 3), 3), 1.0);
  EXPECT_THROW(normalization_eta(Eigen::MatrixXd::Zero(3, 3), 1), NumericalError);
  // K sigma2 / (P eta) equals (sigma2 / P) tr(Psi_sum).
  const Eigen::MatrixXd psi = testing::random_psd(4, 3);
  const double eta = normalization_eta(psi, 3), s2 = 0.2, p = 5.0;
  EXPECT_NEAR(3.0 * s2 / (p * eta), s2 / p * psi.trace(), 1e-14);
}

TEST(SumSe, BasicCases) {
  const double zeros[] = {0.0, 0.0};
  const double ones[] = {1.0, 1.0};
  EXPECT_EQ(sum_se(zeros, ones, 1.0, 0.98).se_nats, 0.0);
  const auto p = params(1.0, 1.0, 4);
  EXPECT_DOUBLE_EQ(p.prelog, 0.98);
  const double s[] = {std::numbers::e - 1.0};
  const double i[] = {1.0};
  const auto b = sum_se(s, i, 1.0, 0.98);
  EXPECT_NEAR(b.se_nats, 0.98, 1e-15);
  EXPECT_NEAR(b.se_bits, 0.98 / std::numbers::ln2, 1e-15);
  EXPECT_NEAR(b.users[0].sinr, std::numbers::e - 1.0, 1e-15);
}

TEST(SystemParams, Validation) {
  EXPECT_THROW(params(0.0, 1.0, 2).validate(), std::invalid_argument);
  EXPECT_THROW(SystemParams::from_coherence(1.0, 1.0, 2, 2, 2).validate(), std::invalid_argument);
}

TEST(SumSe, MonotoneInPower) {
  auto problem = testing::small_problem(4, 4, 3);
  const Eigen::VectorXd y = testing::random_feasible(16, problem.array.morphing_range, 4);
  double prev = 0.0;
  for (double dbm = 0.0; dbm <= 60.0; dbm += 5.0) {
    problem.system.total_power = dbm_to_watts(dbm);
    const double se = sum_se_value(problem, y);
    EXPECT_GE(se, prev);
    prev = se;
  }
}

TEST(SumSe, PermutationEquivariant) {
  auto problem = testing::small_problem(3, 3, 3);
  const Eigen::VectorXd y = testing::random_feasible(9, problem.array.morphing_range, 5);
  const auto a = evaluate(problem, y);
  std::swap(problem.attenuation[0], problem.attenuation[2]);
  const auto b = evaluate(problem, y);
  EXPECT_NEAR(a.se.se_nats, b.se.se_nats, 1e-12 * a.se.se_nats);
  EXPECT_NEAR(a.se.users[0].signal, b.se.users[2].signal, 1e-12 * a.se.users[0].signal);
  EXPECT_NEAR(a.se.users[0].interference, b.se.users[2].interference, 1e-12 * a.se.users[0].interference);
}

TEST(SumSe, JointRescalingInvariant) {
  auto problem = testing::small_problem(3, 3, 2);
  const Eigen::VectorXd y = testing::random_feasible(9, problem.array.morphing_range, 6);
  const double base = sum_se_value(problem, y);
  const double c = 7.5;
  problem.element_area *= c;
  problem.pilot.p_train /= c;
  problem.system.total_power /= c;
  EXPECT_NEAR(sum_se_value(problem, y), base, 1e-12 * base);
}

TEST(SumSe, PureAndDeterministic) {
  const auto problem = testing::small_problem(4, 4, 2);
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(16);
  EXPECT_EQ(sum_se_value(problem, y), sum_se_value(problem, y));
}

TEST(SumSe, CompressedFormIsLarger) {
  auto problem = testing::small_problem(4, 4, 2);
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(16);
  const double exact = sum_se_value(problem, y);
  problem.system.form = InterferenceForm::kCompressed;
  EXPECT_GT(sum_se_value(problem, y), exact);
}

}  // namespace
}  // namespace fim

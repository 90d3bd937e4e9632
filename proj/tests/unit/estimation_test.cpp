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

#include "fim/errors.hpp"
#include "fim/estimation.hpp"
#include "support.hpp"

namespace fim {
namespace {

TEST(Precision, ScalarCases) {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  EXPECT_TRUE(precision_matrix(eye, 1.0).isApprox(0.5 * eye, 1e-15));
  // Pure-noise limit: Q = (tau p / sigma2) I.
  PilotConfig p{4, 2.0, 0.5, 200};
  EXPECT_TRUE(precision_matrix(Eigen::MatrixXd::Zero(4, 4), p).isApprox(16.0 * eye, 1e-15));
}

TEST(Precision, MatchesDirectInverse) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Eigen::MatrixXd r = testing::random_psd(8, s);
    const double c = 0.05;
    const Eigen::MatrixXd q = precision_matrix(r, c);
    const Eigen::MatrixXd ref = (r + c * Eigen::MatrixXd::Identity(8, 8)).inverse();
    EXPECT_LE((q - ref).norm(), 1e-10 * ref.norm());
    const Eigen::MatrixXd residual = q * (r + c * Eigen::MatrixXd::Identity(8, 8)) - Eigen::MatrixXd::Identity(8, 8);
    EXPECT_LE(residual.norm(), 1e-10);
    EXPECT_EQ(q, q.transpose());
  }
}

TEST(Precision, FailsLoudlyOnSingularInput) {
  EXPECT_THROW(precision_matrix(Eigen::MatrixXd::Zero(3, 3), 0.0), NumericalError);
  EXPECT_THROW(precision_matrix(Eigen::MatrixXd::Identity(3, 3), -1.0), std::invalid_argument);
  EXPECT_THROW(precision_matrix(Eigen::MatrixXd::Identity(3, 2), 1.0), std::invalid_argument);
}

TEST(Estimation, IdentityCovariance) {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd q = precision_matrix(eye, 1.0);
  const Eigen::MatrixXd psi = estimate_covariance(eye, q);
  EXPECT_TRUE(psi.isApprox(0.5 * eye, 1e-15));
  EXPECT_TRUE(mse_matrix(eye, psi).isApprox(0.5 * eye, 1e-15));
}

TEST(Estimation, PerfectTrainingLimit) {
  const Eigen::MatrixXd r = testing::random_psd(6, 3) + 0.1 * Eigen::MatrixXd::Identity(6, 6);
  const Eigen::MatrixXd psi = estimate_covariance(r, precision_matrix(r, 1e-12));
  EXPECT_LE((psi - r).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(mse_matrix(r, psi).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Estimation, MmseEstimateIsLinear) {
  const Eigen::MatrixXd r = testing::random_psd(5, 4);
  const Eigen::MatrixXd q = precision_matrix(r, 0.3);
  EXPECT_TRUE(mmse_estimate(Eigen::VectorXcd::Zero(5), r, q).isZero(0.0));
  Eigen::VectorXcd a = Eigen::VectorXcd::Random(5), b = Eigen::VectorXcd::Random(5);
  const std::complex<double> s(0.3, -1.2);
  EXPECT_TRUE(mmse_estimate(a + s * b, r, q).isApprox(mmse_estimate(a, r, q) + s * mmse_estimate(b, r, q), 1e-12));
  EXPECT_THROW(mmse_estimate(Eigen::VectorXcd::Zero(4), r, q), std::invalid_argument);
  // Noise-free limit recovers the channel when R is nonsingular.
  const Eigen::MatrixXd rp = r + Eigen::MatrixXd::Identity(5, 5);
  EXPECT_TRUE(mmse_estimate(a, rp, precision_matrix(rp, 1e-14)).isApprox(a, 1e-10));
}

TEST(Estimation, TraceOrderingAndPsd) {
  const auto problem = testing::small_problem(4, 4, 3);
  const auto ev = evaluate(problem, testing::random_feasible(16, problem.array.morphing_range, 2));
  for (int k = 0; k < 3; ++k) {
    const auto& u = ev.estimation.users[static_cast<std::size_t>(k)];
    const double tr_r = ev.correlation.r_users[static_cast<std::size_t>(k)].trace();
    EXPECT_NEAR(tr_r, 16.0 * ev.correlation.user_scale(k), 1e-12 * tr_r);
    EXPECT_GE(u.psi.trace(), 0.0);
    EXPECT_LE(u.psi.trace(), tr_r);
    for (const Eigen::MatrixXd* m : {&u.psi, &u.mse}) {
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(*m);
      EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8 * eig.eigenvalues().maxCoeff());
    }
  }
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(16, 16);
  for (const auto& u : ev.estimation.users) sum += u.psi;
  EXPECT_EQ(sum, ev.estimation.psi_sum);
}

TEST(Estimation, MonotoneInTrainingPower) {
  const Eigen::MatrixXd r = testing::random_psd(8, 9);
  double prev = -1.0;
  for (int i = 0; i < 10; ++i) {
    PilotConfig p{2, std::pow(10.0, i - 5.0), 1.0, 200};
    const double t = estimate_covariance(r, precision_matrix(r, p)).trace();
    EXPECT_GE(t, prev);
    prev = t;
  }
}

TEST(Estimation, ConfigurationDependent) {
  const auto problem = testing::small_problem(3, 3, 2);
  const double zeta = problem.array.morphing_range;
  const auto a = evaluate(problem, testing::random_feasible(9, zeta, 1));
  const auto b = evaluate(problem, testing::random_feasible(9, zeta, 2));
  EXPECT_GT((a.estimation.users[0].psi - b.estimation.users[0].psi).norm(), 0.0);
}

TEST(PilotConfig, Validation) {
  EXPECT_NO_THROW((PilotConfig{2, 1.0, 1.0, 200}.validate(2)));
  EXPECT_THROW((PilotConfig{1, 1.0, 1.0, 200}.validate(2)), std::invalid_argument);
  EXPECT_THROW((PilotConfig{200, 1.0, 1.0, 200}.validate(2)), std::invalid_argument);
  EXPECT_THROW((PilotConfig{2, 0.0, 1.0, 200}.validate(2)), std::invalid_argument);
  EXPECT_THROW((PilotConfig{2, 1.0, 0.0, 200}.validate(2)), std::invalid_argument);
}

}  // namespace
}  // namespace fim

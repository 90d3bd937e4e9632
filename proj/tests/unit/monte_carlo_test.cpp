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

#include "fim/correlation.hpp"
#include "fim/errors.hpp"
#include "fim/monte_carlo.hpp"
#include "support.hpp"

namespace fim {
namespace {

Eigen::MatrixXcd empirical_covariance(const ChannelSampler& s, int m, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  const Eigen::Index n = s.factor().rows();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXcd h = sample_channel(s, rng);
    acc += h * h.adjoint();
  }
  return acc / m;
}

TEST(Sampler, ZeroCovarianceGivesZeroChannel) {
  const ChannelSampler s(Eigen::MatrixXd::Zero(4, 4));
  Rng rng = make_rng(1, 0);
  EXPECT_TRUE(sample_channel(s, rng).isZero(0.0));
}

TEST(Sampler, IdentityCovariance) {
  const ChannelSampler s(Eigen::MatrixXd::Identity(8, 8));
  EXPECT_LE(relative_frobenius_error(empirical_covariance(s, 20000, 2), Eigen::MatrixXd::Identity(8, 8)), 0.03);
}

TEST(Sampler, CorrelatedCovarianceAndCircularity) {
  const auto problem = testing::small_problem(4, 4, 1);
  const auto ev = evaluate(problem, testing::random_feasible(16, problem.array.morphing_range, 1));
  const Eigen::MatrixXd r = ev.correlation.r_fim;
  const ChannelSampler s(r);
  EXPECT_LE(relative_frobenius_error(empirical_covariance(s, 20000, 3), r), 0.03);
  // Pseudo-covariance E{h h^T} vanishes.
  Rng rng = make_rng(4, 0);
  Eigen::MatrixXcd pseudo = Eigen::MatrixXcd::Zero(16, 16);
  for (int i = 0; i < 20000; ++i) {
    const Eigen::VectorXcd h = s.sample(rng);
    pseudo += h * h.transpose();
  }
  EXPECT_LE((pseudo / 20000.0).norm() / r.norm(), 0.03);
}

TEST(Sampler, RejectsIndefiniteCovariance) {
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 0) = -1.0;
  EXPECT_THROW(ChannelSampler{bad}, NumericalError);
}

TEST(Training, NoiseStatistics) {
  PilotConfig p{2, 4.0, 2.0, 200};  // noise variance 0.25
  Rng rng = make_rng(5, 0);
  const Eigen::VectorXcd h = Eigen::VectorXcd::Zero(6);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(6, 6);
  for (int i = 0; i < 20000; ++i) {
    const Eigen::VectorXcd r = simulate_training(h, p, rng);
    acc += r * r.adjoint();
  }
  EXPECT_LE(relative_frobenius_error(acc / 20000.0, 0.25 * Eigen::MatrixXd::Identity(6, 6)), 0.03);

  // Doubling tau halves the de-spread noise variance.
  PilotConfig p2 = p;
  p2.tau = 4;
  Rng rng2 = make_rng(6, 0);
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i < 20000; ++i) {
    e1 += simulate_training(h, p, rng2).squaredNorm();
    e2 += simulate_training(h, p2, rng2).squaredNorm();
  }
  EXPECT_NEAR(e2 / e1, 0.5, 0.02);

  PilotConfig noiseless = p;
  noiseless.sigma2 = 0.0;
  const Eigen::VectorXcd g = Eigen::VectorXcd::Random(6);
  EXPECT_EQ(simulate_training(g, noiseless, rng), g);
}

TEST(PlaneWave, FiniteSumApproachesSinc) {
  ArrayConfig cfg;
  cfg.n_x = 3;
  cfg.n_z = 1;
  cfg.spacing_h = cfg.spacing_v = 0.25;
  cfg.wavelength = 1.0;
  const auto pos = build_positions(cfg, MorphingVector::flat(3, 0.0));
  Rng rng = make_rng(7, 0);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(3, 3);
  const int m = 10000;
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXcd h = sample_plane_wave_channel(pos, 1.0, 1.0, 200, rng);
    acc += h * h.adjoint();
  }
  EXPECT_LE(relative_frobenius_error(acc / m, correlation_matrix(pos, 1.0)), 0.05);
}

TEST(Uatf, NoiseFreeSingleUserIdentity) {
  // R = I, K = 1, perfect pilots: S -> N^2, and the closed forms hold.
  const int n = 4;
  const std::vector<double> mu{1.0};
  const auto corr = scale_user_covariances(Eigen::MatrixXd::Identity(n, n), 1.0, mu);
  PilotConfig pilot{1, 1e12, 1e-12, 200};
  const auto sys = SystemParams::from_coherence(1.0, 0.01, 1, 200, 1);
  McConfig mc;
  mc.realizations = 20000;
  const auto est = estimate_uatf_terms(corr, pilot, sys, mc);
  EXPECT_NEAR(est.users[0].signal.value, n * n, 0.03 * n * n);
  const auto stats = estimate_statistics(corr, pilot);
  const double i_exact = interference_power(corr.r_users[0], stats.users[0].psi, stats.psi_sum, sys);
  EXPECT_NEAR(est.users[0].interference.value, i_exact, 0.03 * i_exact);
  EXPECT_NEAR(est.eta.value, 1.0 / n, 0.03 / n);
}

class UatfOracle : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(UatfOracle, ClosedFormsWithinThreePercent) {
  const auto [side, k] = GetParam();
  const auto problem = testing::small_problem(side, side, k, 31);
  const Eigen::VectorXd y = testing::random_feasible(problem.elements(), problem.array.morphing_range, 12);
  const auto ev = evaluate(problem, y);
  McConfig mc;
  mc.seed = 77;
  const auto est = estimate_uatf_terms(problem, y, mc);
  EXPECT_FALSE(est.undersampled(0.03));
  for (int u = 0; u < k; ++u) {
    const auto ku = static_cast<std::size_t>(u);
    const auto& e = est.users[ku];
    const auto& cf = ev.estimation.users[ku];
    EXPECT_LE(relative_frobenius_error(e.psi, cf.psi), 0.03);
    EXPECT_LE(relative_frobenius_error(e.mse, cf.mse), 0.03);
    EXPECT_LE(e.cross_cov.norm(), 0.03 * cf.psi.norm());
    // Decomposition: channel covariance = Psi + MSE (+ the error cross terms).
    const Eigen::MatrixXcd sum = e.psi + e.mse + e.cross_cov + e.cross_cov.adjoint();
    EXPECT_LE((sum - e.channel_cov).norm(), 1e-9 * e.channel_cov.norm());
    EXPECT_NEAR(e.signal.value, ev.se.users[ku].signal, 0.03 * ev.se.users[ku].signal);
    EXPECT_NEAR(e.interference.value, ev.se.users[ku].interference, 0.03 * ev.se.users[ku].interference);
    // Cross-user terms follow tr(R_k Psi_i).
    double cross = 0.0;
    for (int i = 0; i < k; ++i) {
      if (i != u) cross += (ev.correlation.r_users[ku] * ev.estimation.users[static_cast<std::size_t>(i)].psi).trace();
    }
    if (k > 1) EXPECT_NEAR(e.cross_interference.value, cross, 0.03 * cross);
  }
  EXPECT_NEAR(est.mean_trace_ff.value, ev.estimation.psi_sum.trace(), 0.03 * ev.estimation.psi_sum.trace());
  EXPECT_NEAR(est.eta.value, ev.se.eta, 0.03 * ev.se.eta);
  EXPECT_NEAR(est.se_nats.value, ev.se.se_nats, 0.03 * ev.se.se_nats);
}

INSTANTIATE_TEST_SUITE_P(Sizes, UatfOracle,
                         ::testing::Values(std::make_pair(3, 2), std::make_pair(4, 2), std::make_pair(4, 4)));

TEST(Uatf, SeededDeterminismAndThreadIndependence) {
  const auto problem = testing::small_problem(3, 3, 2);
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(9);
  McConfig mc;
  mc.realizations = 4000;
  mc.seed = 3;
  const auto a = estimate_uatf_terms(problem, y, mc);
  mc.threads = 3;
  const auto b = estimate_uatf_terms(problem, y, mc);
  EXPECT_EQ(a.se_nats.value, b.se_nats.value);
  EXPECT_EQ(a.users[1].psi, b.users[1].psi);
  mc.seed = 4;
  EXPECT_NE(estimate_uatf_terms(problem, y, mc).se_nats.value, a.se_nats.value);
}

TEST(Uatf, StandardErrorsShrinkAsInverseRoot) {
  const auto problem = testing::small_problem(3, 3, 2);
  const Eigen::VectorXd y = testing::random_feasible(9, problem.array.morphing_range, 2);
  McConfig mc;
  mc.seed = 9;
  double se[3];
  int i = 0;
  for (int m : {2000, 8000, 32000}) {
    mc.realizations = m;
    se[i++] = estimate_uatf_terms(problem, y, mc).users[0].signal.std_error;
  }
  // Each 4x increase in M should roughly halve the standard error.
  EXPECT_NEAR(se[0] / se[1], 2.0, 0.9);
  EXPECT_NEAR(se[1] / se[2], 2.0, 0.9);
  EXPECT_NEAR(se[0] / se[2], 4.0, 1.5);
}

}  // namespace
}  // namespace fim

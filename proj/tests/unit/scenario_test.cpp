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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fim/csv.hpp"
#include "fim/scenario.hpp"

namespace fim {
namespace {

TEST(Units, DbmConversions) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_DOUBLE_EQ(dbm_to_watts(0.0), 1e-3);
  EXPECT_NEAR(watts_to_dbm(dbm_to_watts(-17.3)), -17.3, 1e-12);
}

TEST(Units, NoisePower) {
  EXPECT_NEAR(watts_to_dbm(noise_power(-174.0, 1.0)), -174.0, 1e-12);
  EXPECT_NEAR(watts_to_dbm(noise_power(-174.0, 20e6)), -100.98970004336019, 1e-9);
  EXPECT_NEAR(noise_power(-171.0, 20e6) / noise_power(-174.0, 20e6), std::pow(10.0, 0.3), 1e-12);
  EXPECT_THROW(noise_power(-174.0, 0.0), std::invalid_argument);
}

TEST(PathLoss, FreeSpace) {
  const double lambda = kSpeedOfLight / 3.5e9;
  EXPECT_NEAR(path_loss(lambda / (4.0 * std::numbers::pi), lambda), 1.0, 1e-12);
  EXPECT_NEAR(path_loss(50.0, lambda) / path_loss(100.0, lambda), 4.0, 1e-12);
  // 20 log10(4 pi d / lambda) = 83.32 dB at 100 m.
  EXPECT_NEAR(10.0 * std::log10(path_loss(100.0, lambda)), -83.32, 0.01);
  EXPECT_THROW(path_loss(0.0, lambda), std::invalid_argument);
  EXPECT_THROW(path_loss(-1.0, lambda), std::invalid_argument);
}

TEST(PathLoss, LogDistance) {
  const double lambda = 0.1;
  PathLossConfig cfg{PathLossModel::kLogDistance, 3.0, 1.0};
  EXPECT_NEAR(path_loss(1.0, lambda, cfg), path_loss(1.0, lambda), 1e-15);
  EXPECT_NEAR(path_loss(10.0, lambda, cfg) / path_loss(1.0, lambda, cfg), 1e-3, 1e-15);
}

TEST(Drop, ZeroRadiusPutsEveryoneAtCenter) {
  auto sc = ScenarioConfig::reference();
  sc.circle_radius = 0.0;
  Rng rng = make_rng(1, 0);
  const auto d = drop_users(sc, rng);
  for (int k = 0; k < sc.users; ++k) {
    EXPECT_DOUBLE_EQ(d.distances[static_cast<std::size_t>(k)], 100.0);
    EXPECT_EQ(d.attenuation[static_cast<std::size_t>(k)], d.attenuation[0]);
  }
}

TEST(Drop, AreaUniformMeanRadius) {
  auto sc = ScenarioConfig::reference();
  sc.users = 1;
  Rng rng = make_rng(2, 0);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto d = drop_users(sc, rng);
    const Eigen::Vector3d off = d.positions[0] - Eigen::Vector3d(0.0, sc.circle_distance, 0.0);
    sum += off.norm();
    EXPECT_GE(d.distances[0], 95.0);
    EXPECT_LE(d.distances[0], 105.0);
  }
  EXPECT_NEAR(sum / draws, 2.0 * sc.circle_radius / 3.0, 0.01);
}

TEST(Scenario, ReferenceProblem) {
  const auto sc = ScenarioConfig::reference();
  Rng rng = make_rng(1, 0);
  const auto p = make_problem(sc, drop_users(sc, rng));
  EXPECT_EQ(p.elements(), 64);
  EXPECT_EQ(p.users(), 4);
  EXPECT_DOUBLE_EQ(p.system.prelog, 0.98);
  EXPECT_DOUBLE_EQ(p.element_area, sc.spacing_h * sc.spacing_v);
  EXPECT_DOUBLE_EQ(p.pilot.p_train, 1e-2);
  EXPECT_EQ(p.pilot.tau, 4);
}

TEST(Scenario, ValidationErrors) {
  auto sc = ScenarioConfig::reference();
  sc.circle_distance = 4.0;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  sc = ScenarioConfig::reference();
  sc.pilot_length = 2;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  sc = ScenarioConfig::reference();
  sc.coherence_block = 4;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  EXPECT_THROW(apply_sweep_value(ScenarioConfig::reference(), SweepAxis::kElements, 50.0), std::invalid_argument);
  EXPECT_EQ(apply_sweep_value(ScenarioConfig::reference(), SweepAxis::kElements, 36.0).n_z, 6);
}

ScenarioConfig tiny() {
  auto sc = ScenarioConfig::reference();
  sc.n_x = sc.n_z = 3;
  sc.users = 2;
  sc.drops = 4;
  sc.seed = 11;
  return sc;
}

PgmConfig tiny_optimizer(const ScenarioConfig& sc) {
  auto c = PgmConfig::defaults_for(sc.wavelength());
  c.restarts = 2;
  return c;
}

TEST(Sweep, ZeroRangeHasZeroGain) {
  const auto sc = tiny();
  const double lambda = sc.wavelength();
  const auto r = run_sweep(sc, {SweepAxis::kMorphingRange, {0.0, lambda / 4, lambda / 2}}, tiny_optimizer(sc));
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_EQ(r.points[0].gain_pct, 0.0);
  for (std::size_t p = 0; p < 3; ++p) {
    EXPECT_EQ(r.points[p].drops_ok, 4);
    EXPECT_GE(r.points[p].mean_fim_nats, r.points[p].mean_raa_nats);
    if (p > 0) EXPECT_GE(r.points[p].mean_fim_nats, r.points[p - 1].mean_fim_nats);
  }
  for (const auto& o : r.outcomes) EXPECT_GE(o.fim_se_nats, o.raa_se_nats);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  const auto sc = tiny();
  const SweepSpec spec{SweepAxis::kPower, {10.0, 30.0}};
  std::ostringstream a, b, ta, tb;
  auto r1 = run_sweep(sc, spec, tiny_optimizer(sc), {.threads = 1});
  auto r2 = run_sweep(sc, spec, tiny_optimizer(sc), {.threads = 3});
  write_aggregate_csv(r1, a);
  write_aggregate_csv(r2, b);
  write_tidy_csv(r1, ta);
  write_tidy_csv(r2, tb);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(Sweep, CsvShapes) {
  const auto sc = tiny();
  const auto r = run_sweep(sc, {SweepAxis::kElements, {4.0, 9.0}}, tiny_optimizer(sc));
  std::ostringstream tidy, agg;
  write_tidy_csv(r, tidy);
  write_aggregate_csv(r, agg);
  std::istringstream ti(tidy.str()), ai(agg.str());
  std::string line;
  int rows = -1;
  while (std::getline(ti, line)) ++rows;
  EXPECT_EQ(rows, 2 * 4 * 2);  // points x drops x {FIM, RAA}
  std::getline(ai, line);
  EXPECT_EQ(split_csv_line(line)[2], "elements");
  std::getline(ai, line);
  EXPECT_EQ(split_csv_line(line)[2], "4");
  EXPECT_EQ(split_csv_line(line)[3], "4");
}

TEST(Sweep, FailedDropsAreRecordedNotDropped) {
  auto sc = tiny();
  sc.drops = 2;
  // Attenuation underflows to zero, which the covariance model rejects.
  sc.path_loss = {PathLossModel::kLogDistance, 400.0, 1.0};
  std::vector<std::string> messages;
  SweepOptions opts;
  opts.threads = 1;
  opts.progress = [&](const std::string& m) { messages.push_back(m); };
  const auto r = run_sweep(sc, {SweepAxis::kPower, {30.0}}, tiny_optimizer(sc), opts);
  EXPECT_EQ(r.points[0].drops_failed, 2);
  EXPECT_EQ(r.points[0].drops_ok, 0);
  EXPECT_TRUE(r.outcomes[0].failed);
  EXPECT_FALSE(r.outcomes[0].error.empty());
  EXPECT_EQ(std::count_if(messages.begin(), messages.end(),
                          [](const std::string& m) { return m.rfind("warning", 0) == 0; }),
            2);
  std::ostringstream tidy;
  write_tidy_csv(r, tidy);
  EXPECT_NE(tidy.str().find("FIM,failed"), std::string::npos);
}

TEST(Sweep, RejectsBadAxisValues) {
  const auto sc = tiny();
  EXPECT_THROW(run_sweep(sc, {SweepAxis::kPower, {}}, tiny_optimizer(sc)), std::invalid_argument);
  EXPECT_THROW(run_sweep(sc, {SweepAxis::kPower, {NAN}}, tiny_optimizer(sc)), std::invalid_argument);
  EXPECT_THROW(run_sweep(sc, {SweepAxis::kMorphingRange, {-1.0}}, tiny_optimizer(sc)), std::invalid_argument);
}

}  // namespace
}  // namespace fim

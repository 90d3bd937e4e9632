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
#include <iosfwd>
#include <string>
#include <vector>

#include "fim/pgm.hpp"
#include "fim/problem.hpp"
#include "fim/rng.hpp"

namespace fim {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class PathLossModel { kFreeSpace, kLogDistance };

// kFreeSpace:   mu = (lambda / (4 pi d))^2
// kLogDistance: mu = (lambda / (4 pi d0))^2 * (d0 / d)^exponent
struct PathLossConfig {
  PathLossModel model = PathLossModel::kFreeSpace;
  double exponent = 3.0;
  double reference_distance = 1.0;  // d0 (m)
};

// Downlink scenario: users dropped uniformly in a disk on the ground plane
// (z = 0) whose center lies circle_distance meters in front of the array
// (along +y). The array reference element is at the origin.
struct ScenarioConfig {
  double carrier_hz = 3.5e9;
  double bandwidth_hz = 20e6;
  double noise_psd_dbm_hz = -174.0;
  double circle_radius = 5.0;
  double circle_distance = 100.0;
  int users = 4;
  int drops = 100;
  double tx_power_dbm = 30.0;
  double train_power_dbm = 10.0;
  int coherence_block = 200;
  int pilot_length = 0;  // 0 means tau = K
  int n_x = 8;
  int n_z = 8;
  double spacing_h = 0.0;       // meters
  double spacing_v = 0.0;       // meters
  double morphing_range = 0.0;  // meters
  double element_area = 0.0;    // 0 means spacing_h * spacing_v
  PathLossConfig path_loss;
  InterferenceForm interference = InterferenceForm::kExact;
  std::uint64_t seed = 1;

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  int tau() const { return pilot_length > 0 ? pilot_length : users; }
  ArrayConfig array() const;

  // N = 64, d_E = lambda/4, zeta = lambda/2, K = 4, P = 30 dBm, p_train = 10 dBm.
  static ScenarioConfig reference();

  void validate() const;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Throws std::invalid_argument for a nonpositive distance.
double path_loss(double distance, double wavelength, const PathLossConfig& cfg = {});

double noise_power(double psd_dbm_hz, double bandwidth_hz);

struct UserDrop {
  std::vector<Eigen::Vector3d> positions;
  std::vector<double> distances;    // to the array origin
  std::vector<double> attenuation;  // mu_k
};

// Area-uniform placement: radius = R sqrt(u), angle uniform.
UserDrop drop_users(const ScenarioConfig& scenario, Rng& rng);

FimProblem make_problem(const ScenarioConfig& scenario, const UserDrop& drop);

enum class SweepAxis { kPower, kElements, kMorphingRange };

const char* to_string(SweepAxis axis);

// Values are dBm for kPower, element counts N (perfect squares, N = n^2
// on an n x n grid) for kElements, and meters for kMorphingRange.
struct SweepSpec {
  SweepAxis axis = SweepAxis::kPower;
  std::vector<double> values;
};

ScenarioConfig apply_sweep_value(ScenarioConfig scenario, SweepAxis axis, double value);

struct DropOutcome {
  std::size_t point = 0;
  double value = 0.0;
  int drop = 0;
  bool failed = false;
  std::string error;
  double fim_se_nats = 0.0;
  double raa_se_nats = 0.0;
  int iterations = 0;
  Termination termination = Termination::kMaxIterations;
  int best_start = 0;
  double restart_spread = 0.0;  // max - min final SE over the random restarts
  double kkt_residual = 0.0;
};

struct SweepPoint {
  double value = 0.0;
  int drops_ok = 0;
  int drops_failed = 0;
  double mean_fim_nats = 0.0;
  double mean_raa_nats = 0.0;
  double gain_pct = 0.0;  // (FIM - RAA) / RAA * 100 on the means
  double ci95_fim_nats = 0.0;
  double ci95_raa_nats = 0.0;
  double noise_margin_nats = 0.0;  // mean restart spread over drops
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kPower;
  std::vector<DropOutcome> outcomes;  // point-major, then drop
  std::vector<SweepPoint> points;
};

struct SweepOptions {
  int threads = 0;  // 0 = hardware concurrency
  // On the power and morphing-range axes with ascending values, the previous
  // point's optimum is added as a start (it stays feasible and its SE can
  // only grow along these axes).
  bool continuation = true;
  std::function<void(const std::string&)> progress;
};

// Per drop: FIM optimized with multi-start including y = 0, RAA evaluated at
// y = 0. Failed drops are recorded and excluded from the means.
SweepResult run_sweep(const ScenarioConfig& scenario, const SweepSpec& sweep, const PgmConfig& optimizer,
                      const SweepOptions& options = {});

// axis,value,elements,drop,scheme,status,se_nats,se_bits,iterations,termination,best_start
void write_tidy_csv(const SweepResult& result, std::ostream& out);

// axis,value,elements,drops_ok,drops_failed,mean_fim_nats,mean_raa_nats,mean_fim_bits,mean_raa_bits,
// gain_pct,ci95_fim_nats,ci95_raa_nats,noise_margin_nats
void write_aggregate_csv(const SweepResult& result, std::ostream& out);

}  // namespace fim

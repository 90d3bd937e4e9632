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

#include "fim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fim/csv.hpp"
#include "fim/parallel.hpp"

namespace fim {

ArrayConfig ScenarioConfig::array() const {
  ArrayConfig a;
  a.n_x = n_x;
  a.n_z = n_z;
  a.spacing_h = spacing_h;
  a.spacing_v = spacing_v;
  a.wavelength = wavelength();
  a.morphing_range = morphing_range;
  return a;
}

ScenarioConfig ScenarioConfig::reference() {
  ScenarioConfig s;
  const double lambda = s.wavelength();
  s.spacing_h = lambda / 4.0;
  s.spacing_v = lambda / 4.0;
  s.morphing_range = lambda / 2.0;
  return s;
}

void ScenarioConfig::validate() const {
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("carrier frequency must be > 0");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  if (!(circle_radius >= 0.0)) throw std::invalid_argument("user circle radius must be >= 0");
  if (!(circle_distance > circle_radius)) throw std::invalid_argument("user circle must not contain the array");
  if (users < 1) throw std::invalid_argument("need at least one user");
  if (drops < 1) throw std::invalid_argument("need at least one drop");
  if (coherence_block <= tau()) throw std::invalid_argument("coherence block must exceed the pilot length");
  if (tau() < users) throw std::invalid_argument("pilot length must be >= number of users");
  if (!(element_area >= 0.0)) throw std::invalid_argument("element area must be >= 0");
  if (path_loss.model == PathLossModel::kLogDistance &&
      (!(path_loss.exponent > 0.0) || !(path_loss.reference_distance > 0.0))) {
    throw std::invalid_argument("log-distance path loss needs positive exponent and reference distance");
  }
  array().validate();
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double path_loss(double distance, double wavelength, const PathLossConfig& cfg) {
  if (!(distance > 0.0)) throw std::invalid_argument("path loss needs a positive distance");
  if (cfg.model == PathLossModel::kFreeSpace) {
    const double a = wavelength / (4.0 * std::numbers::pi * distance);
    return a * a;
  }
  const double a = wavelength / (4.0 * std::numbers::pi * cfg.reference_distance);
  return a * a * std::pow(cfg.reference_distance / distance, cfg.exponent);
}

double noise_power(double psd_dbm_hz, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  return dbm_to_watts(psd_dbm_hz + 10.0 * std::log10(bandwidth_hz));
}

UserDrop drop_users(const ScenarioConfig& scenario, Rng& rng) {
  if (scenario.users < 1) throw std::invalid_argument("need at least one user");
  UserDrop drop;
  const double lambda = scenario.wavelength();
  for (int k = 0; k < scenario.users; ++k) {
    const double radius = scenario.circle_radius * std::sqrt(uniform01(rng));
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    const Eigen::Vector3d p(radius * std::cos(angle), scenario.circle_distance + radius * std::sin(angle), 0.0);
    const double d = p.norm();
    drop.positions.push_back(p);
    drop.distances.push_back(d);
    drop.attenuation.push_back(path_loss(d, lambda, scenario.path_loss));
  }
  return drop;
}

FimProblem make_problem(const ScenarioConfig& scenario, const UserDrop& drop) {
  scenario.validate();
  FimProblem p;
  p.array = scenario.array();
  p.element_area = scenario.element_area > 0.0 ? scenario.element_area : scenario.spacing_h * scenario.spacing_v;
  p.attenuation = drop.attenuation;
  const double sigma2 = noise_power(scenario.noise_psd_dbm_hz, scenario.bandwidth_hz);
  p.pilot.tau = scenario.tau();
  p.pilot.tau_c = scenario.coherence_block;
  p.pilot.p_train = dbm_to_watts(scenario.train_power_dbm);
  p.pilot.sigma2 = sigma2;
  p.system = SystemParams::from_coherence(dbm_to_watts(scenario.tx_power_dbm), sigma2, scenario.users,
                                          scenario.coherence_block, scenario.tau(), scenario.interference);
  p.validate();
  return p;
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kPower: return "power";
    case SweepAxis::kElements: return "elements";
    case SweepAxis::kMorphingRange: return "morphing_range";
  }
  return "unknown";
}

ScenarioConfig apply_sweep_value(ScenarioConfig scenario, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::kPower:
      scenario.tx_power_dbm = value;
      break;
    case SweepAxis::kElements: {
      const int side = static_cast<int>(std::lround(std::sqrt(value)));
      if (side < 1 || side * side != static_cast<int>(std::lround(value))) {
        throw std::invalid_argument("element sweep values must be perfect squares, got " + format_double(value));
      }
      scenario.n_x = side;
      scenario.n_z = side;
      break;
    }
    case SweepAxis::kMorphingRange:
      scenario.morphing_range = value;
      break;
  }
  return scenario;
}

namespace {

constexpr std::uint64_t kOptimizerStream = 1u << 20;

bool ascending(const std::vector<double>& v) { return std::is_sorted(v.begin(), v.end()); }

}  // namespace

SweepResult run_sweep(const ScenarioConfig& scenario, const SweepSpec& sweep, const PgmConfig& optimizer,
                      const SweepOptions& options) {
  if (sweep.values.empty()) throw std::invalid_argument("sweep needs at least one value");
  for (double v : sweep.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("sweep values must be finite");
    apply_sweep_value(scenario, sweep.axis, v).validate();
  }
  optimizer.validate();

  const std::size_t points = sweep.values.size();
  const auto drops = static_cast<std::size_t>(scenario.drops);
  const bool continuation = options.continuation && sweep.axis != SweepAxis::kElements && ascending(sweep.values);

  SweepResult result;
  result.axis = sweep.axis;
  result.outcomes.resize(points * drops);

  parallel_for(drops, options.threads, [&](std::size_t d) {
    Rng placement = make_rng(scenario.seed, d);
    const UserDrop drop = drop_users(scenario, placement);
    PgmConfig cfg = optimizer;
    cfg.seed = derive_seed(scenario.seed, kOptimizerStream + d);
    cfg.history_stride = 0;
    Eigen::VectorXd previous_opt;
    for (std::size_t p = 0; p < points; ++p) {
      DropOutcome& out = result.outcomes[p * drops + d];
      out.point = p;
      out.value = sweep.values[p];
      out.drop = static_cast<int>(d);
      try {
        const ScenarioConfig sc = apply_sweep_value(scenario, sweep.axis, sweep.values[p]);
        const FimProblem problem = make_problem(sc, drop);
        const Eigen::Index n = problem.elements();
        const Eigen::VectorXd flat = Eigen::VectorXd::Zero(n);
        out.raa_se_nats = sum_se_value(problem, flat);
        std::vector<Eigen::VectorXd> starts{flat};
        if (continuation && previous_opt.size() == n && (previous_opt.array() <= sc.morphing_range).all()) {
          starts.push_back(previous_opt);
        }
        const ObjectiveFunctions objective = make_objective(problem);
        MultiStartResult ms = multi_start(objective, n, sc.morphing_range, cfg, starts);
        out.fim_se_nats = ms.best.objective;
        out.iterations = ms.best.trajectory.iterations();
        out.termination = ms.best.trajectory.termination;
        out.best_start = ms.best_index;
        out.kkt_residual = ms.best.trajectory.kkt_residuals.empty() ? 0.0 : ms.best.trajectory.kkt_residuals.back();
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const auto& run : ms.runs) {
          if (run.start_index < static_cast<int>(starts.size())) continue;
          lo = first ? run.objective : std::min(lo, run.objective);
          hi = first ? run.objective : std::max(hi, run.objective);
          first = false;
        }
        out.restart_spread = hi - lo;
        previous_opt = ms.best.y_opt;
      } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
        if (options.progress) {
          options.progress("warning: drop " + std::to_string(d) + " at " + to_string(sweep.axis) + " = " +
                           format_double(sweep.values[p]) + " failed: " + e.what());
        }
      }
    }
    if (options.progress) options.progress("drop " + std::to_string(d + 1) + "/" + std::to_string(drops) + " done");
  });

  for (std::size_t p = 0; p < points; ++p) {
    SweepPoint pt;
    pt.value = sweep.values[p];
    double sf = 0.0, sr = 0.0, sf2 = 0.0, sr2 = 0.0, margin = 0.0;
    for (std::size_t d = 0; d < drops; ++d) {
      const DropOutcome& o = result.outcomes[p * drops + d];
      if (o.failed) {
        ++pt.drops_failed;
        continue;
      }
      ++pt.drops_ok;
      sf += o.fim_se_nats;
      sr += o.raa_se_nats;
      sf2 += o.fim_se_nats * o.fim_se_nats;
      sr2 += o.raa_se_nats * o.raa_se_nats;
      margin += o.restart_spread;
    }
    if (pt.drops_ok > 0) {
      const double n = pt.drops_ok;
      pt.mean_fim_nats = sf / n;
      pt.mean_raa_nats = sr / n;
      pt.gain_pct = (pt.mean_fim_nats - pt.mean_raa_nats) / pt.mean_raa_nats * 100.0;
      pt.noise_margin_nats = margin / n;
      if (pt.drops_ok > 1) {
        const double vf = std::max(0.0, (sf2 - n * pt.mean_fim_nats * pt.mean_fim_nats) / (n - 1.0));
        const double vr = std::max(0.0, (sr2 - n * pt.mean_raa_nats * pt.mean_raa_nats) / (n - 1.0));
        pt.ci95_fim_nats = 1.96 * std::sqrt(vf / n);
        pt.ci95_raa_nats = 1.96 * std::sqrt(vr / n);
      }
    }
    result.points.push_back(pt);
  }
  return result;
}

namespace {

std::string elements_column(SweepAxis axis, double value) {
  return axis == SweepAxis::kElements ? std::to_string(std::lround(value)) : "";
}

}  // namespace

void write_tidy_csv(const SweepResult& result, std::ostream& out) {
  out << "axis,value,elements,drop,scheme,status,se_nats,se_bits,iterations,termination,best_start\n";
  for (const auto& o : result.outcomes) {
    const std::string prefix = std::string(to_string(result.axis)) + ',' + format_double(o.value) + ',' +
                               elements_column(result.axis, o.value) + ',' + std::to_string(o.drop) + ',';
    if (o.failed) {
      out << prefix << "FIM,failed,,,,,\n" << prefix << "RAA,failed,,,,,\n";
      continue;
    }
    out << prefix << "FIM,ok," << format_double(o.fim_se_nats) << ','
        << format_double(o.fim_se_nats / std::numbers::ln2) << ',' << o.iterations << ',' << to_string(o.termination)
        << ',' << o.best_start << '\n';
    out << prefix << "RAA,ok," << format_double(o.raa_se_nats) << ','
        << format_double(o.raa_se_nats / std::numbers::ln2) << ",0,none,\n";
  }
}

void write_aggregate_csv(const SweepResult& result, std::ostream& out) {
  out << "axis,value,elements,drops_ok,drops_failed,mean_fim_nats,mean_raa_nats,mean_fim_bits,mean_raa_bits,"
         "gain_pct,ci95_fim_nats,ci95_raa_nats,noise_margin_nats\n";
  for (const auto& p : result.points) {
    out << to_string(result.axis) << ',' << format_double(p.value) << ',' << elements_column(result.axis, p.value) << ','
        << p.drops_ok << ',' << p.drops_failed << ',' << format_double(p.mean_fim_nats) << ','
        << format_double(p.mean_raa_nats) << ',' << format_double(p.mean_fim_nats / std::numbers::ln2) << ','
        << format_double(p.mean_raa_nats / std::numbers::ln2) << ',' << format_double(p.gain_pct) << ','
        << format_double(p.ci95_fim_nats) << ',' << format_double(p.ci95_raa_nats) << ','
        << format_double(p.noise_margin_nats) << '\n';
  }
}

}  // namespace fim

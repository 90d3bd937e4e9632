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

#include "fim/pgm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fim/csv.hpp"
#include "fim/errors.hpp"
#include "fim/rng.hpp"

namespace fim {

PgmConfig PgmConfig::defaults_for(double wavelength) {
  PgmConfig cfg;
  cfg.initial_step = wavelength / 10.0;
  cfg.min_step = 1e-12 * wavelength;
  return cfg;
}

void PgmConfig::validate() const {
  if (!(initial_step > 0.0)) throw std::invalid_argument("optimizer: initial step must be > 0");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("optimizer: shrink must lie in (0, 1)");
  if (!(sufficient_increase > 0.0 && sufficient_increase < 1.0))
    throw std::invalid_argument("optimizer: sufficient-increase constant must lie in (0, 1)");
  if (max_iterations < 1) throw std::invalid_argument("optimizer: max_iterations must be >= 1");
  if (objective_patience < 1) throw std::invalid_argument("optimizer: objective patience must be >= 1");
  if (!(objective_tolerance > 0.0) || !(mapping_tolerance > 0.0))
    throw std::invalid_argument("optimizer: tolerances must be > 0");
  if (!(min_step > 0.0) || min_step > initial_step)
    throw std::invalid_argument("optimizer: min step must lie in (0, initial step]");
  if (restarts < 1) throw std::invalid_argument("optimizer: restarts must be >= 1");
  if (history_stride < 0) throw std::invalid_argument("optimizer: history stride must be >= 0");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kObjectiveTolerance: return "objective_tolerance";
    case Termination::kGradientMapping: return "gradient_mapping";
    case Termination::kMaxIterations: return "max_iterations";
    case Termination::kLineSearchStall: return "line_search_stall";
  }
  return "unknown";
}

double kkt_residual(const Eigen::VectorXd& y, const Eigen::VectorXd& grad, double zeta) {
  double worst = 0.0;
  for (Eigen::Index n = 0; n < y.size(); ++n) {
    const bool at_lower = y[n] <= 0.0;
    const bool at_upper = y[n] >= zeta;
    double v;
    if (at_lower && at_upper) {
      v = 0.0;
    } else if (at_lower) {
      v = std::max(grad[n], 0.0);
    } else if (at_upper) {
      v = std::max(-grad[n], 0.0);
    } else {
      v = std::abs(grad[n]);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

namespace {

Eigen::VectorXd project(const Eigen::VectorXd& y, double zeta) { return y.cwiseMax(0.0).cwiseMin(zeta); }

std::string describe(const Eigen::VectorXd& y) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < y.size(); ++i) os << (i ? ", " : "") << y[i];
  os << "]";
  return os.str();
}

double checked_value(const ObjectiveFunctions& f, const Eigen::VectorXd& y) {
  const double v = f.value(y);
  if (!std::isfinite(v)) throw NumericalError("non-finite objective at y = " + describe(y));
  return v;
}

Eigen::VectorXd checked_gradient(const ObjectiveFunctions& f, const Eigen::VectorXd& y) {
  Eigen::VectorXd g = f.gradient(y);
  if (!g.allFinite()) throw NumericalError("non-finite gradient at y = " + describe(y));
  return g;
}

}  // namespace

ArmijoResult armijo_step(const ObjectiveFunctions& objective, const Eigen::VectorXd& y, double value,
                         const Eigen::VectorXd& grad, double zeta, double trial_step, const PgmConfig& cfg) {
  ArmijoResult out;
  double step = trial_step;
  while (step >= cfg.min_step) {
    Eigen::VectorXd candidate = project(y + step * grad, zeta);
    if (candidate == y) {
      // stationary in the projected sense; a zero step is trivially accepted
      out.accepted = true;
      out.step = step;
      out.y_next = std::move(candidate);
      out.objective_next = value;
      return out;
    }
    const double f_next = checked_value(objective, candidate);
    // Difference form: value + c1 <g, d> can round back to value near a
    // stationary point, which would accept non-improving steps.
    if (f_next - value >= cfg.sufficient_increase * grad.dot(candidate - y)) {
      out.accepted = true;
      out.step = step;
      out.y_next = std::move(candidate);
      out.objective_next = f_next;
      return out;
    }
    step *= cfg.shrink;
    ++out.backtracks;
  }
  out.step = step;
  return out;
}

PgmResult optimize(const ObjectiveFunctions& objective, const Eigen::VectorXd& y0, double zeta, const PgmConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  for (Eigen::Index n = 0; n < y0.size(); ++n) {
    if (!(y0[n] >= 0.0 && y0[n] <= zeta)) throw std::invalid_argument("initial morphing vector is infeasible");
  }
  PgmResult result;
  auto& traj = result.trajectory;
  Eigen::VectorXd y = y0;
  double f = checked_value(objective, y);
  Eigen::VectorXd g = checked_gradient(objective, y);
  traj.objective.push_back(f);
  if (cfg.history_stride > 0) {
    traj.iterates.push_back(y);
    traj.iterate_index.push_back(0);
  }

  double last_step = cfg.initial_step;
  bool done = false;
  int flat = 0;
  for (int j = 1; j <= cfg.max_iterations && !done; ++j) {
    const double trial = std::min(cfg.initial_step, last_step / cfg.shrink);
    ArmijoResult step = armijo_step(objective, y, f, g, zeta, trial, cfg);
    if (!step.accepted) {
      traj.termination = Termination::kLineSearchStall;
      break;
    }
    const double mapping = (step.y_next - y).norm() / step.step;
    const double previous = f;
    y = std::move(step.y_next);
    f = step.objective_next;
    g = checked_gradient(objective, y);
    last_step = step.step;

    traj.objective.push_back(f);
    traj.steps.push_back(step.step);
    traj.mapping_norms.push_back(mapping);
    traj.backtracks.push_back(step.backtracks);
    const double kkt = kkt_residual(y, g, zeta);
    traj.kkt_residuals.push_back(kkt);
    if (cfg.history_stride > 0 && j % cfg.history_stride == 0) {
      traj.iterates.push_back(y);
      traj.iterate_index.push_back(j);
    }

    if (kkt <= cfg.mapping_tolerance) {
      traj.termination = Termination::kGradientMapping;
      done = true;
    } else {
      // A single near-zero gain is common while zigzagging in a narrow ridge;
      // only a run of them indicates the objective has actually flattened.
      const bool tiny = std::abs(f - previous) <= cfg.objective_tolerance * std::max(std::abs(f), 1e-300);
      flat = tiny ? flat + 1 : 0;
      if (flat >= cfg.objective_patience) {
        traj.termination = Termination::kObjectiveTolerance;
        done = true;
      }
    }
  }
  if (!done && traj.termination != Termination::kLineSearchStall) traj.termination = Termination::kMaxIterations;
  if (cfg.history_stride > 0 && traj.iterate_index.back() != traj.iterations()) {
    traj.iterates.push_back(y);
    traj.iterate_index.push_back(traj.iterations());
  }
  result.y_opt = std::move(y);
  result.objective = f;
  traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

Eigen::VectorXd random_start(Eigen::Index elements, double zeta, std::uint64_t seed, std::uint64_t stream) {
  Rng rng = make_rng(seed, stream);
  Eigen::VectorXd y(elements);
  for (Eigen::Index n = 0; n < elements; ++n) y[n] = zeta * uniform01(rng);
  return y;
}

PgmResult optimize(const ObjectiveFunctions& objective, Eigen::Index elements, double zeta, const PgmConfig& cfg) {
  return optimize(objective, random_start(elements, zeta, cfg.seed, 0), zeta, cfg);
}

MultiStartResult multi_start(const ObjectiveFunctions& objective, Eigen::Index elements, double zeta,
                             const PgmConfig& cfg, const std::vector<Eigen::VectorXd>& explicit_starts) {
  cfg.validate();
  MultiStartResult out;
  bool have_best = false;
  auto consider = [&](PgmResult run, int index) {
    out.runs.push_back({index, run.objective, run.trajectory.iterations(), run.trajectory.termination});
    if (!have_best || run.objective > out.best.objective) {
      out.best = std::move(run);
      out.best_index = index;
      have_best = true;
    }
  };
  int index = 0;
  for (const auto& start : explicit_starts) consider(optimize(objective, start, zeta, cfg), index++);
  for (int r = 0; r < cfg.restarts; ++r) {
    consider(optimize(objective, random_start(elements, zeta, cfg.seed, static_cast<std::uint64_t>(r)), zeta, cfg),
             index++);
  }
  return out;
}

void write_trajectory_csv(const PgmTrajectory& trajectory, std::ostream& out) {
  out << "iteration,se_nats,se_bits,step,grad_map_norm\n";
  for (std::size_t j = 0; j < trajectory.objective.size(); ++j) {
    const double se = trajectory.objective[j];
    out << j << ',' << format_double(se) << ',' << format_double(se / std::numbers::ln2) << ',';
    if (j == 0) {
      out << ",\n";
    } else {
      out << format_double(trajectory.steps[j - 1]) << ',' << format_double(trajectory.mapping_norms[j - 1]) << '\n';
    }
  }
}

}  // namespace fim

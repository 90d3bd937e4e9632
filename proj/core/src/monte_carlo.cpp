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

#include "fim/monte_carlo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fim/errors.hpp"
#include "fim/parallel.hpp"

namespace fim {

void McConfig::validate() const {
  if (realizations < 1) throw std::invalid_argument("monte carlo: realizations must be >= 1");
  if (batches < 1) throw std::invalid_argument("monte carlo: batches must be >= 1");
}

ChannelSampler::ChannelSampler(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != covariance.cols()) throw std::invalid_argument("covariance must be square");
  const Eigen::Index n = covariance.rows();
  if (n == 0 || covariance.isZero(0.0)) {
    factor_ = Eigen::MatrixXd::Zero(n, n);
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (covariance + covariance.transpose()));
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of channel covariance failed");
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double top = lambda.maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda[i] < -1e-8 * std::max(top, 0.0) || (top <= 0.0 && lambda[i] < 0.0)) {
      throw NumericalError("channel covariance is indefinite (eigenvalue " + std::to_string(lambda[i]) + ")");
    }
    lambda[i] = std::sqrt(std::max(lambda[i], 0.0));
  }
  factor_ = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::VectorXcd ChannelSampler::sample(Rng& rng) const {
  Eigen::VectorXcd w(factor_.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = complex_normal(rng);
  return factor_.cast<std::complex<double>>() * w;
}

Eigen::VectorXcd sample_channel(const ChannelSampler& sampler, Rng& rng) { return sampler.sample(rng); }

Eigen::VectorXcd simulate_training(const Eigen::VectorXcd& h, const PilotConfig& pilot, Rng& rng) {
  if (!(pilot.sigma2 >= 0.0) || !(pilot.p_train > 0.0) || pilot.tau < 1) {
    throw std::invalid_argument("simulate_training: invalid pilot configuration");
  }
  const double std_dev = std::sqrt(pilot.sigma2 / (pilot.tau * pilot.p_train));
  Eigen::VectorXcd r = h;
  if (std_dev == 0.0) return r;
  for (Eigen::Index i = 0; i < r.size(); ++i) r[i] += std_dev * complex_normal(rng);
  return r;
}

Eigen::VectorXcd sample_plane_wave_channel(const PositionSet& pos, double wavelength, double gain, int paths, Rng& rng,
                                           FrontHalfSpace half_space) {
  if (paths < 1) throw std::invalid_argument("plane-wave channel needs at least one path");
  const Eigen::Index n = pos.size();
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(n);
  const double amp = std::sqrt(gain / paths);
  for (int l = 0; l < paths; ++l) {
    // inverse CDF of cos(t)/2 on [-pi/2, pi/2]
    const double elevation = std::asin(2.0 * uniform01(rng) - 1.0);
    const double azimuth = std::numbers::pi * (uniform01(rng) - 0.5);
    const std::complex<double> c = amp * complex_normal(rng);
    const Eigen::Vector3d k = wave_vector(elevation, azimuth, wavelength, half_space);
    for (Eigen::Index m = 0; m < n; ++m) h[m] += c * std::polar(1.0, k.dot(pos.position(m)));
  }
  return h;
}

namespace {

struct UserSums {
  std::complex<double> g_self = 0.0;
  double g_self_abs2 = 0.0;
  double cross_abs2 = 0.0;
  Eigen::MatrixXcd psi, mse, chan, cross;
};

struct BatchSums {
  long count = 0;
  double trace_ff = 0.0;
  std::vector<UserSums> users;

  void init(int k_users, Eigen::Index n) {
    users.resize(static_cast<std::size_t>(k_users));
    for (auto& u : users) {
      u.psi = Eigen::MatrixXcd::Zero(n, n);
      u.mse = Eigen::MatrixXcd::Zero(n, n);
      u.chan = Eigen::MatrixXcd::Zero(n, n);
      u.cross = Eigen::MatrixXcd::Zero(n, n);
    }
  }

  void add(const BatchSums& o) {
    count += o.count;
    trace_ff += o.trace_ff;
    for (std::size_t k = 0; k < users.size(); ++k) {
      users[k].g_self += o.users[k].g_self;
      users[k].g_self_abs2 += o.users[k].g_self_abs2;
      users[k].cross_abs2 += o.users[k].cross_abs2;
      users[k].psi += o.users[k].psi;
      users[k].mse += o.users[k].mse;
      users[k].chan += o.users[k].chan;
      users[k].cross += o.users[k].cross;
    }
  }
};

struct ScalarStats {
  std::vector<double> signal, self_var, cross, interference, sinr;
  double trace_ff = 0.0, eta = 0.0, se = 0.0;
};

ScalarStats scalar_stats(const BatchSums& s, const SystemParams& sys) {
  const auto k_users = s.users.size();
  const double m = static_cast<double>(s.count);
  ScalarStats out;
  out.trace_ff = s.trace_ff / m;
  out.eta = static_cast<double>(k_users) / out.trace_ff;
  const double noise = static_cast<double>(k_users) * sys.sigma2 / (sys.total_power * out.eta);
  double acc = 0.0;
  for (const auto& u : s.users) {
    const std::complex<double> mean_g = u.g_self / m;
    const double sig = std::norm(mean_g);
    const double var = u.g_self_abs2 / m - sig;
    const double cross = u.cross_abs2 / m;
    const double inter = var + cross + noise;
    out.signal.push_back(sig);
    out.self_var.push_back(var);
    out.cross.push_back(cross);
    out.interference.push_back(inter);
    out.sinr.push_back(sig / inter);
    acc += std::log1p(sig / inter);
  }
  out.se = sys.prelog * acc;
  return out;
}

McStat with_error(double pooled, const std::vector<double>& per_batch) {
  McStat st{pooled, 0.0};
  const auto b = per_batch.size();
  if (b < 2) return st;
  double mean = 0.0;
  for (double v : per_batch) mean += v;
  mean /= static_cast<double>(b);
  double ss = 0.0;
  for (double v : per_batch) ss += (v - mean) * (v - mean);
  st.std_error = std::sqrt(ss / (static_cast<double>(b) * static_cast<double>(b - 1)));
  return st;
}

}  // namespace

bool McEstimates::undersampled(double tolerance) const {
  const double limit = 0.5 * tolerance;
  auto bad = [&](const McStat& s) { return s.relative_error() > limit; };
  if (bad(eta) || bad(se_nats)) return true;
  for (const auto& u : users) {
    if (bad(u.signal) || bad(u.interference)) return true;
  }
  return false;
}

McEstimates estimate_uatf_terms(const CorrelationSet& corr, const PilotConfig& pilot, const SystemParams& sys,
                                const McConfig& cfg) {
  cfg.validate();
  const int k_users = corr.users();
  const Eigen::Index n = corr.r_fim.rows();
  const double reg = pilot.noise_regularizer();

  std::vector<ChannelSampler> samplers;
  std::vector<Eigen::MatrixXcd> filters;  // R_k Q_k
  for (const auto& r : corr.r_users) {
    samplers.emplace_back(r);
    filters.push_back((r * precision_matrix(r, reg)).cast<std::complex<double>>());
  }

  const int batches = std::min(cfg.batches, cfg.realizations);
  std::vector<BatchSums> sums(static_cast<std::size_t>(batches));
  parallel_for(static_cast<std::size_t>(batches), cfg.threads, [&](std::size_t b) {
    BatchSums& acc = sums[b];
    acc.init(k_users, n);
    Rng rng = make_rng(cfg.seed, b);
    const long count = cfg.realizations / batches + (static_cast<long>(b) < cfg.realizations % batches ? 1 : 0);
    std::vector<Eigen::VectorXcd> h(static_cast<std::size_t>(k_users));
    std::vector<Eigen::VectorXcd> h_hat(static_cast<std::size_t>(k_users));
    for (long t = 0; t < count; ++t) {
      for (int k = 0; k < k_users; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        h[ku] = samplers[ku].sample(rng);
        h_hat[ku] = filters[ku] * simulate_training(h[ku], pilot, rng);
        acc.trace_ff += h_hat[ku].squaredNorm();
      }
      for (int k = 0; k < k_users; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        auto& u = acc.users[ku];
        for (int i = 0; i < k_users; ++i) {
          const std::complex<double> g = h[ku].dot(h_hat[static_cast<std::size_t>(i)]);  // h_k^H h_hat_i
          if (i == k) {
            u.g_self += g;
            u.g_self_abs2 += std::norm(g);
          } else {
            u.cross_abs2 += std::norm(g);
          }
        }
        const Eigen::VectorXcd err = h[ku] - h_hat[ku];
        u.psi.noalias() += h_hat[ku] * h_hat[ku].adjoint();
        u.mse.noalias() += err * err.adjoint();
        u.chan.noalias() += h[ku] * h[ku].adjoint();
        u.cross.noalias() += err * h_hat[ku].adjoint();
      }
    }
    acc.count = count;
  });

  BatchSums pooled;
  pooled.init(k_users, n);
  for (const auto& b : sums) pooled.add(b);

  const ScalarStats all = scalar_stats(pooled, sys);
  std::vector<ScalarStats> per;
  per.reserve(sums.size());
  for (const auto& b : sums) per.push_back(scalar_stats(b, sys));
  auto column = [&](auto getter) {
    std::vector<double> v;
    for (const auto& p : per) v.push_back(getter(p));
    return v;
  };

  McEstimates out;
  out.realizations = cfg.realizations;
  out.mean_trace_ff = with_error(all.trace_ff, column([](const ScalarStats& s) { return s.trace_ff; }));
  out.eta = with_error(all.eta, column([](const ScalarStats& s) { return s.eta; }));
  out.se_nats = with_error(all.se, column([](const ScalarStats& s) { return s.se; }));
  const double m = static_cast<double>(pooled.count);
  auto hermitian = [](const Eigen::MatrixXcd& a) -> Eigen::MatrixXcd { return 0.5 * (a + a.adjoint()); };
  for (int k = 0; k < k_users; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    McUserEstimates u;
    u.psi = hermitian(pooled.users[ku].psi / m);
    u.mse = hermitian(pooled.users[ku].mse / m);
    u.channel_cov = hermitian(pooled.users[ku].chan / m);
    u.cross_cov = pooled.users[ku].cross / m;
    u.signal = with_error(all.signal[ku], column([ku](const ScalarStats& s) { return s.signal[ku]; }));
    u.self_variance = with_error(all.self_var[ku], column([ku](const ScalarStats& s) { return s.self_var[ku]; }));
    u.cross_interference = with_error(all.cross[ku], column([ku](const ScalarStats& s) { return s.cross[ku]; }));
    u.interference = with_error(all.interference[ku], column([ku](const ScalarStats& s) { return s.interference[ku]; }));
    u.sinr = with_error(all.sinr[ku], column([ku](const ScalarStats& s) { return s.sinr[ku]; }));
    out.users.push_back(std::move(u));
  }
  return out;
}

McEstimates estimate_uatf_terms(const FimProblem& problem, const Eigen::VectorXd& y, const McConfig& cfg) {
  const Evaluation ev = evaluate(problem, y);
  return estimate_uatf_terms(ev.correlation, problem.pilot, problem.system, cfg);
}

double relative_frobenius_error(const Eigen::MatrixXcd& empirical, const Eigen::MatrixXd& reference) {
  return (empirical - reference.cast<std::complex<double>>()).norm() / reference.norm();
}

}  // namespace fim

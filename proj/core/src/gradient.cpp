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

#include "fim/gradient.hpp"

#include <bit>
#include <stdexcept>

#include "fim/errors.hpp"

namespace fim {

namespace {

// T X + X T^T - T X T^T for symmetric X.
Eigen::MatrixXd sandwich(const Eigen::MatrixXd& t, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd tx = t * x;
  return tx + tx.transpose() - tx * t.transpose();
}

double sparse_trace(const Eigen::MatrixXd& g, const Eigen::MatrixXd& rows, Eigen::Index n) {
  return g.col(n).dot(rows.row(n).transpose()) + g.row(n).dot(rows.row(n));
}

void check_fresh(const GradientWorkspace& ws, const Eigen::VectorXd& y) {
  if (y.size() != ws.y.size() || morphing_fingerprint(y) != ws.fingerprint || y != ws.y) {
    throw StaleWorkspaceError("gradient workspace was built for a different morphing vector");
  }
}

}  // namespace

std::uint64_t morphing_fingerprint(const Eigen::VectorXd& y) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    h ^= std::bit_cast<std::uint64_t>(y[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

GradientWorkspace build_workspace(const FimProblem& problem, const Eigen::VectorXd& y) {
  GradientWorkspace ws;
  ws.y = y;
  ws.fingerprint = morphing_fingerprint(y);
  ws.evaluation = evaluate(problem, y);
  ws.derivative_rows =
      correlation_derivative_rows(build_positions_unchecked(problem.array, y), problem.array.wavelength);
  ws.system = problem.system;
  ws.element_area = problem.element_area;
  ws.attenuation = problem.attenuation;

  const auto& corr = ws.evaluation.correlation;
  const auto& est = ws.evaluation.estimation;
  const int k_users = corr.users();
  const Eigen::Index n = corr.r_fim.rows();
  std::vector<Eigen::MatrixXd> t(static_cast<std::size_t>(k_users));
  for (int k = 0; k < k_users; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    t[ku] = est.users[ku].q * corr.r_users[ku];
    ws.c.push_back(sandwich(t[ku], Eigen::MatrixXd::Identity(n, n)));
    ws.e.push_back(sandwich(t[ku], est.users[ku].psi));
  }
  ws.d.resize(static_cast<std::size_t>(k_users));
  for (int k = 0; k < k_users; ++k) {
    for (int i = 0; i < k_users; ++i) {
      ws.d[static_cast<std::size_t>(k)].push_back(sandwich(t[static_cast<std::size_t>(i)],
                                                           corr.r_users[static_cast<std::size_t>(k)]));
    }
  }
  return ws;
}

double grad_signal(const GradientWorkspace& ws, int k, Eigen::Index n, const Eigen::VectorXd& y) {
  check_fresh(ws, y);
  const auto ku = static_cast<std::size_t>(k);
  const double scale = ws.element_area * ws.attenuation[ku];
  return 2.0 * scale * ws.evaluation.estimation.users[ku].psi.trace() *
         sparse_trace(ws.c[ku], ws.derivative_rows, n);
}

double grad_interference(const GradientWorkspace& ws, int k, Eigen::Index n, const Eigen::VectorXd& y) {
  check_fresh(ws, y);
  const auto ku = static_cast<std::size_t>(k);
  const auto& rows = ws.derivative_rows;
  const double a = ws.element_area;
  double g = a * ws.attenuation[ku] * sparse_trace(ws.evaluation.estimation.psi_sum, rows, n);
  double noise = 0.0;
  for (std::size_t i = 0; i < ws.attenuation.size(); ++i) {
    g += a * ws.attenuation[i] * sparse_trace(ws.d[ku][i], rows, n);
    noise += a * ws.attenuation[i] * sparse_trace(ws.c[i], rows, n);
  }
  g += ws.system.sigma2 / ws.system.total_power * noise;
  if (ws.system.form == InterferenceForm::kCompressed) {
    g -= 2.0 * a * ws.attenuation[ku] * sparse_trace(ws.e[ku], rows, n);
  }
  return g;
}

Eigen::VectorXd grad_sum_se(const GradientWorkspace& ws, const Eigen::VectorXd& y) {
  check_fresh(ws, y);
  const auto& users = ws.evaluation.se.users;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(y.size());
  for (std::size_t k = 0; k < users.size(); ++k) {
    const double s = users[k].signal;
    const double i = users[k].interference;
    const double w = ws.system.prelog / ((1.0 + users[k].sinr) * i * i);
    for (Eigen::Index n = 0; n < y.size(); ++n) {
      grad[n] += w * (i * grad_signal(ws, static_cast<int>(k), n, y) -
                      s * grad_interference(ws, static_cast<int>(k), n, y));
    }
  }
  return grad;
}

Eigen::VectorXd sum_se_gradient(const FimProblem& problem, const Eigen::VectorXd& y) {
  const Evaluation ev = evaluate(problem, y);
  const PositionSet pos = build_positions_unchecked(problem.array, y);
  const Eigen::MatrixXd rows = correlation_derivative_rows(pos, problem.array.wavelength);
  const auto& corr = ev.correlation;
  const auto& est = ev.estimation;
  const auto& sys = problem.system;
  const auto k_users = corr.r_users.size();
  const Eigen::Index n = y.size();

  // grad_n SE = sum_k alpha_k grad S_k - beta_k grad I_k
  std::vector<double> alpha(k_users);
  std::vector<double> beta(k_users);
  double beta_sum = 0.0;
  double beta_scale_sum = 0.0;
  Eigen::MatrixXd r_bar = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < k_users; ++k) {
    const auto& u = ev.se.users[k];
    const double w = sys.prelog / ((1.0 + u.sinr) * u.interference * u.interference);
    alpha[k] = w * u.interference;
    beta[k] = w * u.signal;
    beta_sum += beta[k];
    beta_scale_sum += beta[k] * corr.user_scale(static_cast<int>(k));
    r_bar += beta[k] * corr.r_users[k];
  }

  // G = sum_i sandwich(T_i, X_i) - (sum_k beta_k a_k) Psi_sum, where the
  // C_i, D_{k,i} and E_i contributions of user i all share T_i = Q_i R_i.
  Eigen::MatrixXd g = -beta_scale_sum * est.psi_sum;
  for (std::size_t i = 0; i < k_users; ++i) {
    const double a_i = corr.user_scale(static_cast<int>(i));
    const double tr_psi = est.users[i].psi.trace();
    Eigen::MatrixXd x = -a_i * r_bar;
    x.diagonal().array() += 2.0 * alpha[i] * a_i * tr_psi - sys.sigma2 / sys.total_power * beta_sum * a_i;
    if (sys.form == InterferenceForm::kCompressed) x += 2.0 * beta[i] * a_i * est.users[i].psi;
    g += sandwich(est.users[i].q * corr.r_users[i], x);
  }
  const Eigen::MatrixXd g_sym = g + g.transpose();
  return g_sym.cwiseProduct(rows).rowwise().sum();
}

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& objective,
                                           const Eigen::VectorXd& y, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  Eigen::VectorXd grad(y.size());
  Eigen::VectorXd probe = y;
  for (Eigen::Index n = 0; n < y.size(); ++n) {
    probe[n] = y[n] + h;
    const double up = objective(probe);
    probe[n] = y[n] - h;
    const double down = objective(probe);
    probe[n] = y[n];
    grad[n] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace fim

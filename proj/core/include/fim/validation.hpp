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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fim/scenario.hpp"

namespace fim {

struct ValidationOptions {
  std::uint64_t seed = 7;
  int threads = 1;
  // Quadrature suite.
  int quadrature_pairs = 100;
  int quadrature_order = 200;
  double quadrature_tolerance = 1e-6;
  // Gradient suite.
  int gradient_configs = 50;
  double gradient_step = 1e-7;  // meters
  double gradient_tolerance = 1e-4;
  // Monte Carlo suite.
  int mc_realizations = 20000;
  int mc_batches = 20;
  double mc_tolerance = 0.03;
  // Deliberately corrupts the analytic gradient; the gradient suite must then fail.
  bool inject_gradient_fault = false;

  void validate() const;
};

struct ValidationCheck {
  std::string suite;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = true;
  bool informational = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const;
  int failures() const;
  void write_text(std::ostream& out) const;
  // suite,name,value,threshold,status,detail
  void write_csv(std::ostream& out) const;
};

// Closed-form sinc correlation vs direct angular integration.
void validate_quadrature(const ScenarioConfig& base, const ValidationOptions& opts, ValidationReport& report);

// Analytic gradient vs central finite differences on random configurations.
void validate_gradient(const ScenarioConfig& base, const ValidationOptions& opts, ValidationReport& report);

// Closed-form estimation and SE terms vs simulated pilots and channels.
void validate_monte_carlo(const ScenarioConfig& base, const ValidationOptions& opts, ValidationReport& report);

ValidationReport run_validation(const ScenarioConfig& base, const ValidationOptions& opts);

}  // namespace fim

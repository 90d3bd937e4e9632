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

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "fim/pgm.hpp"
#include "fim/scenario.hpp"
#include "fim/validation.hpp"

namespace fim {

inline constexpr int kConfigSchemaVersion = 1;

// Carries the offending field (dotted path) and, when known, the 1-based
// source line and column.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message, int line = 0, int column = 0);

  const std::string& field() const { return field_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string field_;
  int line_;
  int column_;
};

struct RunConfig {
  ScenarioConfig scenario;
  PgmConfig optimizer;
  bool continuation = true;
  std::optional<SweepSpec> sweep;
  ValidationOptions validation;
  nlohmann::json document;  // as parsed, after defaults are filled in
};

// Lengths are meters (numbers) or wavelength expressions: "lambda/4",
// "0.25 lambda", "0.25*lambda", "lambda".
double parse_length(const nlohmann::json& value, double wavelength, const std::string& field);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Reference scenario with every field spelled out.
nlohmann::json default_config_json();

// FNV-1a over the canonical dump of the resolved document, hex encoded.
std::string config_hash(const RunConfig& config);

}  // namespace fim

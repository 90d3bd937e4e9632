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

#include "fim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace fim {

namespace {

std::string describe(const std::string& field, const std::string& message, int line, int column) {
  std::string s = "config";
  if (line > 0) s += ":" + std::to_string(line) + (column > 0 ? ":" + std::to_string(column) : "");
  if (!field.empty()) s += ": " + field;
  return s + ": " + message;
}

std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// Best effort: the line where the last path component first appears as a key
// after its parent does.
int locate(const std::string& text, const std::string& field) {
  std::size_t pos = 0;
  std::size_t start = 0;
  bool found = false;
  while (start <= field.size()) {
    const std::size_t dot = field.find('.', start);
    std::string key = field.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    const auto bracket = key.find('[');
    if (bracket != std::string::npos) key.resize(bracket);
    const std::size_t hit = text.find('"' + key + '"', pos);
    if (hit == std::string::npos) break;
    pos = hit;
    found = true;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return found ? line_column(text, pos).first : 0;
}

class Reader {
 public:
  Reader(const nlohmann::json& j, std::string path, const std::string& text) : j_(j), path_(std::move(path)), text_(text) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const std::string field = key.empty() ? path_ : (path_.empty() ? key : path_ + "." + key);
    throw ConfigError(field, message, locate(text_, field));
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const nlohmann::json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  Reader section(const std::string& key) {
    seen_.insert(key);
    static const nlohmann::json empty = nlohmann::json::object();
    const std::string p = path_.empty() ? key : path_ + "." + key;
    return j_.contains(key) ? Reader(j_.at(key), p, text_) : Reader(empty, p, text_);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(key, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  double length(const std::string& key, double fallback, double wavelength) {
    if (!has(key)) return fallback;
    try {
      return parse_length(j_.at(key), wavelength, key);
    } catch (const ConfigError& e) {
      fail(key, e.what());
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(it.key(), "unknown field");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const nlohmann::json& j_;
  std::string path_;
  const std::string& text_;
  std::set<std::string> seen_;
};

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message, int line, int column)
    : std::runtime_error(describe(field, message, line, column)), field_(std::move(field)), line_(line),
      column_(column) {}

double parse_length(const nlohmann::json& value, double wavelength, const std::string& field) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw ConfigError(field, "expected meters or a wavelength expression");
  const std::string s = value.get<std::string>();
  static const std::regex scaled(R"(^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)?\s*\*?\s*(lambda|λ)\s*(?:/\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))?\s*$)");
  static const std::regex meters(R"(^\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*m?\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, scaled)) {
    double v = wavelength;
    if (m[1].matched) v *= std::stod(m[1].str());
    if (m[3].matched) {
      const double den = std::stod(m[3].str());
      if (den == 0.0) throw ConfigError(field, "division by zero in \"" + s + "\"");
      v /= den;
    }
    return v;
  }
  if (std::regex_match(s, m, meters)) return std::stod(m[1].str());
  throw ConfigError(field, "cannot parse length \"" + s + "\" (use meters, \"lambda/4\" or \"0.25 lambda\")");
}

nlohmann::json default_config_json() {
  return nlohmann::json::parse(R"({
  "schema_version": 1,
  "seed": 1,
  "radio": {"carrier_hz": 3.5e9, "bandwidth_hz": 2e7, "noise_psd_dbm_hz": -174},
  "array": {"nx": 8, "nz": 8, "spacing": "lambda/4", "morphing_range": "lambda/2"},
  "users": {"count": 4, "circle_radius_m": 5, "circle_distance_m": 100, "drops": 100,
            "path_loss": {"model": "free_space"}},
  "power": {"tx_dbm": 30, "train_dbm": 10, "coherence_block": 200},
  "model": {"interference": "exact"},
  "optimizer": {"initial_step": "lambda/10", "shrink": 0.5, "sufficient_increase": 1e-4, "max_iterations": 500,
                "objective_tolerance": 1e-15, "mapping_tolerance": 1e-6, "min_step": "1e-12 lambda",
                "restarts": 4, "continuation": true}
})");
}

RunConfig parse_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ConfigError("", msg, line, column);
  }

  RunConfig cfg;
  Reader root(doc, "", text);
  if (!root.has("schema_version")) root.fail("schema_version", "missing (expected 1)");
  if (root.integer("schema_version", 0) != kConfigSchemaVersion) {
    root.fail("schema_version", "unsupported version (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }
  ScenarioConfig& s = cfg.scenario;
  s.seed = root.unsigned_integer("seed", s.seed);

  Reader radio = root.section("radio");
  s.carrier_hz = radio.number("carrier_hz", s.carrier_hz);
  if (!(s.carrier_hz > 0.0)) radio.fail("carrier_hz", "must be > 0");
  s.bandwidth_hz = radio.number("bandwidth_hz", s.bandwidth_hz);
  if (!(s.bandwidth_hz > 0.0)) radio.fail("bandwidth_hz", "must be > 0");
  s.noise_psd_dbm_hz = radio.number("noise_psd_dbm_hz", s.noise_psd_dbm_hz);
  radio.finish();
  const double lambda = s.wavelength();

  Reader array = root.section("array");
  s.n_x = array.integer("nx", s.n_x);
  s.n_z = array.integer("nz", s.n_z);
  if (s.n_x < 1) array.fail("nx", "must be >= 1");
  if (s.n_z < 1) array.fail("nz", "must be >= 1");
  const double spacing = array.length("spacing", lambda / 4.0, lambda);
  s.spacing_h = array.length("spacing_h", spacing, lambda);
  s.spacing_v = array.length("spacing_v", spacing, lambda);
  if (!(s.spacing_h > 0.0)) array.fail("spacing_h", "must be > 0");
  if (!(s.spacing_v > 0.0)) array.fail("spacing_v", "must be > 0");
  s.morphing_range = array.length("morphing_range", lambda / 2.0, lambda);
  if (!(s.morphing_range >= 0.0)) array.fail("morphing_range", "must be >= 0");
  s.element_area = array.number("element_area_m2", 0.0);
  if (!(s.element_area >= 0.0)) array.fail("element_area_m2", "must be >= 0 (0 selects spacing_h * spacing_v)");
  array.finish();

  Reader users = root.section("users");
  s.users = users.integer("count", s.users);
  if (s.users < 1) users.fail("count", "must be >= 1");
  s.circle_radius = users.number("circle_radius_m", s.circle_radius);
  if (!(s.circle_radius >= 0.0)) users.fail("circle_radius_m", "must be >= 0");
  s.circle_distance = users.number("circle_distance_m", s.circle_distance);
  if (!(s.circle_distance > s.circle_radius)) users.fail("circle_distance_m", "must exceed circle_radius_m");
  s.drops = users.integer("drops", s.drops);
  if (s.drops < 1) users.fail("drops", "must be >= 1");
  {
    Reader pl = users.section("path_loss");
    const std::string model = pl.string("model", "free_space");
    if (model == "free_space") {
      s.path_loss.model = PathLossModel::kFreeSpace;
    } else if (model == "log_distance") {
      s.path_loss.model = PathLossModel::kLogDistance;
    } else {
      pl.fail("model", "expected \"free_space\" or \"log_distance\"");
    }
    s.path_loss.exponent = pl.number("exponent", s.path_loss.exponent);
    if (!(s.path_loss.exponent > 0.0)) pl.fail("exponent", "must be > 0");
    s.path_loss.reference_distance = pl.number("reference_distance_m", s.path_loss.reference_distance);
    if (!(s.path_loss.reference_distance > 0.0)) pl.fail("reference_distance_m", "must be > 0");
    pl.finish();
  }
  users.finish();

  Reader power = root.section("power");
  s.tx_power_dbm = power.number("tx_dbm", s.tx_power_dbm);
  s.train_power_dbm = power.number("train_dbm", s.train_power_dbm);
  s.coherence_block = power.integer("coherence_block", s.coherence_block);
  s.pilot_length = power.integer("pilot_length", 0);
  if (s.pilot_length != 0 && s.pilot_length < s.users) power.fail("pilot_length", "must be >= users.count");
  if (s.coherence_block <= s.tau()) power.fail("coherence_block", "must exceed the pilot length");
  power.finish();

  Reader model = root.section("model");
  const std::string form = model.string("interference", "exact");
  if (form == "exact") {
    s.interference = InterferenceForm::kExact;
  } else if (form == "compressed") {
    s.interference = InterferenceForm::kCompressed;
  } else {
    model.fail("interference", "expected \"exact\" or \"compressed\"");
  }
  model.finish();

  Reader opt = root.section("optimizer");
  PgmConfig& o = cfg.optimizer;
  o = PgmConfig::defaults_for(lambda);
  o.restarts = 4;
  o.initial_step = opt.length("initial_step", o.initial_step, lambda);
  o.shrink = opt.number("shrink", o.shrink);
  o.sufficient_increase = opt.number("sufficient_increase", o.sufficient_increase);
  o.max_iterations = opt.integer("max_iterations", o.max_iterations);
  o.objective_tolerance = opt.number("objective_tolerance", o.objective_tolerance);
  o.objective_patience = opt.integer("objective_patience", o.objective_patience);
  o.mapping_tolerance = opt.number("mapping_tolerance", o.mapping_tolerance);
  o.min_step = opt.length("min_step", o.min_step, lambda);
  o.restarts = opt.integer("restarts", o.restarts);
  o.history_stride = opt.integer("history_stride", o.history_stride);
  cfg.continuation = opt.boolean("continuation", cfg.continuation);
  try {
    o.validate();
  } catch (const std::invalid_argument& e) {
    opt.fail("", e.what());
  }
  opt.finish();

  if (root.has("sweep")) {
    Reader sw = root.section("sweep");
    SweepSpec spec;
    const std::string axis = sw.string("axis", "");
    if (axis == "power") {
      spec.axis = SweepAxis::kPower;
    } else if (axis == "elements") {
      spec.axis = SweepAxis::kElements;
    } else if (axis == "morphing_range") {
      spec.axis = SweepAxis::kMorphingRange;
    } else {
      sw.fail("axis", "expected \"power\", \"elements\" or \"morphing_range\"");
    }
    if (!sw.has("values")) sw.fail("values", "missing");
    const auto& values = sw.raw("values");
    if (!values.is_array() || values.empty()) sw.fail("values", "expected a nonempty array");
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::string f = "values[" + std::to_string(i) + "]";
      double v = 0.0;
      try {
        v = spec.axis == SweepAxis::kMorphingRange ? parse_length(values[i], lambda, f)
                                                   : (values[i].is_number() ? values[i].get<double>() : NAN);
      } catch (const ConfigError& e) {
        sw.fail(f, e.what());
      }
      if (!std::isfinite(v)) sw.fail(f, "expected a number");
      try {
        apply_sweep_value(s, spec.axis, v).validate();
      } catch (const std::invalid_argument& e) {
        sw.fail(f, e.what());
      }
      spec.values.push_back(v);
    }
    sw.finish();
    cfg.sweep = spec;
  }

  Reader val = root.section("validate");
  ValidationOptions& v = cfg.validation;
  v.seed = val.unsigned_integer("seed", s.seed);
  v.threads = val.integer("threads", v.threads);
  v.quadrature_pairs = val.integer("quadrature_pairs", v.quadrature_pairs);
  v.quadrature_order = val.integer("quadrature_order", v.quadrature_order);
  v.quadrature_tolerance = val.number("quadrature_tolerance", v.quadrature_tolerance);
  v.gradient_configs = val.integer("gradient_configs", v.gradient_configs);
  v.gradient_step = val.number("gradient_step_m", v.gradient_step);
  v.gradient_tolerance = val.number("gradient_tolerance", v.gradient_tolerance);
  v.mc_realizations = val.integer("realizations", v.mc_realizations);
  v.mc_batches = val.integer("batches", v.mc_batches);
  v.mc_tolerance = val.number("mc_tolerance", v.mc_tolerance);
  v.inject_gradient_fault = val.boolean("fault_injection", v.inject_gradient_fault);
  try {
    v.validate();
  } catch (const std::invalid_argument& e) {
    val.fail("", e.what());
  }
  val.finish();

  root.finish();
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", e.what());
  }
  cfg.document = doc;
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_hash(const RunConfig& config) {
  const std::string canonical = config.document.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fim

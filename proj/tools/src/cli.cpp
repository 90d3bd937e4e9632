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

#include "cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "fim/config.hpp"
#include "fim/csv.hpp"
#include "fim/errors.hpp"
#include "fim/scenario.hpp"
#include "fim/validation.hpp"

namespace fim::cli {

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}


namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string out = ".";
  std::string input;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  int verbosity = 0;
};

class Log {
 public:
  Log(std::ostream& err, int verbosity) : err_(err), verbosity_(verbosity) {}
  void info(const std::string& msg) const {
    if (verbosity_ > 0) err_ << "fimopt: " << msg << '\n';
  }
  void warn(const std::string& msg) const { err_ << "fimopt: " << msg << '\n'; }

 private:
  std::ostream& err_;
  int verbosity_;
};

RunConfig load(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed) {
    cfg.scenario.seed = *o.seed;
    cfg.document["seed"] = *o.seed;
    if (!cfg.document.contains("validate") || !cfg.document["validate"].contains("seed")) {
      cfg.validation.seed = *o.seed;
    }
  }
  if (o.threads > 0) cfg.validation.threads = o.threads;
  return cfg;
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void write_manifest(const RunConfig& cfg, const std::string& command, const fs::path& path) {
  nlohmann::json m;
  m["tool"] = "fimopt";
  m["version"] = FIM_VERSION;
  m["command"] = command;
  m["schema_version"] = kConfigSchemaVersion;
  m["config_hash"] = config_hash(cfg);
  m["seed"] = cfg.scenario.seed;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
#if defined(__clang__)
  m["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
  m["compiler"] = "gcc " __VERSION__;
#endif
  m["config"] = cfg.document;
  open_output(path) << m.dump(2) << '\n';
}

int cmd_optimize(const Options& o, std::ostream& out, const Log& log) {
  const RunConfig cfg = load(o);
  const ScenarioConfig& sc = cfg.scenario;
  Rng placement = make_rng(sc.seed, 0);
  const FimProblem problem = make_problem(sc, drop_users(sc, placement));
  log.info("N = " + std::to_string(problem.elements()) + ", K = " + std::to_string(problem.users()) +
           ", zeta = " + format_double(sc.morphing_range) + " m");

  const Eigen::Index n = problem.elements();
  const Eigen::VectorXd flat = Eigen::VectorXd::Zero(n);
  const double raa = sum_se_value(problem, flat);
  PgmConfig pc = cfg.optimizer;
  pc.seed = sc.seed;
  const MultiStartResult ms = multi_start(make_objective(problem), n, sc.morphing_range, pc, {flat});
  for (const auto& r : ms.runs) {
    log.info("start " + std::to_string(r.start_index) + ": SE " + format_double(r.objective) + " nats after " +
             std::to_string(r.iterations) + " iterations (" + to_string(r.termination) + ")");
  }

  const fs::path dir(o.out);
  {
    auto f = open_output(dir / "trajectory.csv");
    write_trajectory_csv(ms.best.trajectory, f);
  }
  {
    auto f = open_output(dir / "y_opt.csv");
    f << "element,x_m,z_m,y_m,y_lambda\n";
    const double lambda = sc.wavelength();
    for (Eigen::Index i = 0; i < n; ++i) {
      f << i << ',' << format_double(static_cast<double>(i % sc.n_x) * sc.spacing_h) << ','
        << format_double(static_cast<double>(i / sc.n_x) * sc.spacing_v) << ',' << format_double(ms.best.y_opt(i))
        << ',' << format_double(ms.best.y_opt(i) / lambda) << '\n';
    }
  }
  write_manifest(cfg, "optimize", dir / "manifest.json");

  const double fim = ms.best.objective;
  const double gain = (fim - raa) / raa * 100.0;
  out << "optimize: FIM " << format_double(fim) << " nats (" << format_double(fim / std::numbers::ln2)
      << " bits), RAA " << format_double(raa) << " nats, gain " << percent(gain) << "%, "
      << ms.best.trajectory.iterations() << " iterations, " << to_string(ms.best.trajectory.termination) << '\n';
  return kSuccess;
}

int cmd_sweep(const Options& o, std::ostream& out, const Log& log) {
  const RunConfig cfg = load(o);
  const SweepSpec spec = cfg.sweep.value_or(SweepSpec{SweepAxis::kPower, {cfg.scenario.tx_power_dbm}});
  if (!cfg.sweep) log.info("no sweep section; running a single point at the configured power");
  SweepOptions so;
  so.threads = o.threads > 0 ? o.threads : cfg.validation.threads;
  so.continuation = cfg.continuation;
  so.progress = [&](const std::string& msg) {
    if (msg.rfind("warning", 0) == 0) {
      log.warn(msg);
    } else {
      log.info(msg);
    }
  };
  const SweepResult result = run_sweep(cfg.scenario, spec, cfg.optimizer, so);

  const fs::path dir(o.out);
  {
    auto f = open_output(dir / "tidy.csv");
    write_tidy_csv(result, f);
  }
  {
    auto f = open_output(dir / "aggregate.csv");
    write_aggregate_csv(result, f);
  }
  write_manifest(cfg, "sweep", dir / "manifest.json");

  int failed = 0, total = 0;
  for (const auto& p : result.points) {
    failed += p.drops_failed;
    total += p.drops_ok + p.drops_failed;
  }
  if (failed > 0) log.warn(std::to_string(failed) + " of " + std::to_string(total) + " drop evaluations failed");
  out << "sweep: " << to_string(spec.axis) << " over " << result.points.size() << " points x " << cfg.scenario.drops
      << " drops; gain " << percent(result.points.front().gain_pct) << "% .. "
      << percent(result.points.back().gain_pct) << "%";
  if (failed > 0) out << "; " << failed << " failed";
  out << '\n';
  bool any_ok = false;
  for (const auto& p : result.points) any_ok = any_ok || p.drops_ok > 0;
  return any_ok ? kSuccess : kNumericalFailure;
}

int cmd_validate(const Options& o, std::ostream& out, const Log& log) {
  const RunConfig cfg = load(o);
  log.info("running quadrature, gradient and Monte Carlo suites");
  const ValidationReport report = run_validation(cfg.scenario, cfg.validation);
  const fs::path dir(o.out);
  {
    auto f = open_output(dir / "validation.csv");
    report.write_csv(f);
  }
  {
    auto f = open_output(dir / "validation.txt");
    report.write_text(f);
  }
  std::ostringstream text;
  report.write_text(text);
  log.info("\n" + text.str());
  for (const auto& c : report.checks) {
    if (!c.informational && !c.passed) log.warn("FAIL " + c.suite + "/" + c.name + ": " + format_double(c.value));
  }
  out << "validate: " << (report.all_passed() ? "passed" : "FAILED") << " (" << report.failures() << " failing of "
      << report.checks.size() << " checks)\n";
  return report.all_passed() ? kSuccess : kNumericalFailure;
}

int cmd_report(const Options& o, std::ostream& out, const Log& log) {
  const fs::path dir(o.out);
  const fs::path input = o.input.empty() ? dir / "aggregate.csv" : fs::path(o.input);
  std::ifstream in(input);
  if (!in) throw ConfigError("input", "cannot open " + input.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("input", "empty aggregate CSV");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"axis", "value", "mean_fim_bits", "mean_raa_bits", "gain_pct", "drops_ok"}) {
    if (!col.count(need)) throw ConfigError("input", std::string("aggregate CSV lacks column ") + need);
  }
  std::ostringstream md;
  md << "# Sweep report\n\n| axis | value | drops | FIM (bits/s/Hz) | RAA (bits/s/Hz) | gain (%) |\n"
     << "|---|---|---|---|---|---|\n";
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw ConfigError("input", "row " + std::to_string(rows + 2) + " has wrong width");
    const auto num = [&](const char* c) { return std::stod(f[col[c]]); };
    char buf[160];
    std::snprintf(buf, sizeof buf, "| %s | %s | %s | %.4f | %.4f | %.2f |\n", f[col["axis"]].c_str(),
                  f[col["value"]].c_str(), f[col["drops_ok"]].c_str(), num("mean_fim_bits"), num("mean_raa_bits"),
                  num("gain_pct"));
    md << buf;
    ++rows;
  }
  open_output(dir / "report.md") << md.str();
  log.info("wrote " + (dir / "report.md").string());
  out << "report: " << rows << " rows -> " << (dir / "report.md").string() << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Morphing-surface downlink sum-SE optimizer", "fimopt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FIM_VERSION);
  Options o;

  const auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("-c,--config", o.config, "JSON configuration file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "override the master seed");
    sub->add_option("-j,--threads", o.threads, "worker threads (0 = config/auto)")->check(CLI::NonNegativeNumber);
    sub->add_flag("-v,--verbose", o.verbosity, "progress logging to stderr");
  };
  auto* optimize = app.add_subcommand("optimize", "optimize one user drop; writes trajectory.csv and y_opt.csv");
  common(optimize, true);
  auto* sweep = app.add_subcommand("sweep", "FIM vs RAA over a parameter sweep; writes tidy/aggregate CSVs");
  common(sweep, true);
  auto* validate = app.add_subcommand("validate", "run the quadrature, gradient and Monte Carlo oracle suites");
  common(validate, true);
  auto* report = app.add_subcommand("report", "render aggregate.csv as report.md");
  common(report, false);
  report->add_option("-i,--input", o.input, "aggregate CSV (default <out>/aggregate.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  const Log log(err, o.verbosity);
  try {
    if (*optimize) return cmd_optimize(o, out, log);
    if (*sweep) return cmd_sweep(o, out, log);
    if (*validate) return cmd_validate(o, out, log);
    return cmd_report(o, out, log);
  } catch (const ConfigError& e) {
    err << "fimopt: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "fimopt: invalid configuration: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "fimopt: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "fimopt: error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace fim::cli

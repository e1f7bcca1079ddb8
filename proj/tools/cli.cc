/*
 * Copyright 2026 The FedNet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "cli.h"

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fednet/config.h"
#include "fednet/harness.h"
#include "fednet/report.h"

namespace fednet::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config_path;
  std::string out_dir = "results";
  std::vector<std::string> overrides;
  std::optional<uint64_t> seed;
  std::string algos;
  std::string eps;
  std::optional<double> delta;
  std::optional<int> trials;
  bool emit_json = false;
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<double> ParseNumbers(const std::string& text, const char* flag) {
  std::vector<double> values;
  for (const std::string& item : SplitList(text)) {
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      Require(used == item.size(), "");
    } catch (const std::exception&) {
      throw ParameterError(std::string(flag) + ": \"" + item + "\" is not a number");
    }
  }
  Require(!values.empty(), std::string(flag) + ": expected a comma-separated list");
  return values;
}

void ApplyThreadCap() {
  if (const char* env = std::getenv("FEDNET_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    Require(end != env && *end == '\0' && cap >= 1,
            "FEDNET_THREADS must be a positive integer");
    omp_set_num_threads(static_cast<int>(std::min<long>(cap, omp_get_max_threads())));
  }
}

// File values, then --set, then dedicated flags; later sources win.
harness::ExperimentConfig Resolve(const Options& opt, bool sweep, json base = json::object()) {
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    Require(in.good(), "--config: cannot read \"" + opt.config_path + "\"");
    try {
      in >> base;
    } catch (const json::exception& e) {
      throw ParameterError("--config: \"" + opt.config_path + "\" is not valid JSON");
    }
  }
  for (const std::string& assignment : opt.overrides) config::ApplyOverride(base, assignment);
  if (opt.seed) base["seed"] = *opt.seed;
  if (!opt.algos.empty()) base["algos"] = SplitList(opt.algos);
  if (opt.delta) base["delta"] = *opt.delta;
  if (opt.trials) base["trials"] = *opt.trials;
  if (!opt.eps.empty()) {
    const auto values = ParseNumbers(opt.eps, "--eps");
    if (sweep) {
      base["eps_grid"] = values;
    } else {
      Require(values.size() == 1, "--eps: run takes a single total epsilon");
      base["epsilon"] = values.front();
    }
  }
  return config::FromJson(base);
}

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write \"" + path.string() + "\"");
  return out;
}

void PrepareOutDir(const Options& opt, const harness::ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) throw RuntimeFailure("--out: cannot create \"" + opt.out_dir + "\": " + ec.message());
  auto resolved = OpenOutput(fs::path(opt.out_dir) / "resolved_config.json");
  resolved << config::ToJson(cfg).dump(2) << '\n';
  auto edges = OpenOutput(fs::path(opt.out_dir) / "topology.txt");
  graph::WriteEdgeList(edges, graph::RandomConnectedGraph(cfg.num_clients, cfg.avg_degree,
                                                          cfg.topology_seed));
}

int DoRun(const Options& opt, std::ostream& out) {
  Require(!opt.config_path.empty(), "run: --config is required");
  const auto cfg = Resolve(opt, false);
  PrepareOutDir(opt, cfg);
  const auto records = harness::RunLearningCurves(cfg);
  auto csv = OpenOutput(fs::path(opt.out_dir) / "curves.csv");
  report::WriteCurvesCsv(csv, records);
  if (opt.emit_json) {
    auto js = OpenOutput(fs::path(opt.out_dir) / "curves.json");
    report::WriteCurvesJson(js, records);
  }
  out << "wrote " << records.size() << " records to "
      << (fs::path(opt.out_dir) / "curves.csv").string() << '\n';
  return kExitOk;
}

int DoSweep(const Options& opt, std::ostream& out) {
  Require(!opt.config_path.empty(), "sweep: --config is required");
  const auto cfg = Resolve(opt, true);
  Require(!cfg.eps_grid.empty(), "eps_grid: a sweep needs at least one epsilon (--eps)");
  PrepareOutDir(opt, cfg);
  const auto rows = harness::RunTradeoffSweep(cfg);
  auto csv = OpenOutput(fs::path(opt.out_dir) / "sweep.csv");
  report::WriteSweepCsv(csv, rows);
  if (opt.emit_json) {
    auto js = OpenOutput(fs::path(opt.out_dir) / "sweep.json");
    report::WriteSweepJson(js, rows);
  }
  out << "wrote " << rows.size() << " rows to "
      << (fs::path(opt.out_dir) / "sweep.csv").string() << '\n';
  return kExitOk;
}

int DoAudit(const Options& opt, std::ostream& out) {
  // Defaults to the LAD problem when no config is given.
  const auto cfg = Resolve(opt, false, json{{"problem", "lad"}, {"K", 10}});
  Require(cfg.problem == harness::ProblemKind::kLad,
          "problem: the sensitivity audit requires problem = lad");
  const auto data = harness::GenerateSynthetic(cfg.num_clients, cfg.samples_per_client,
                                               cfg.num_features, cfg.noise_std, cfg.seed);
  const ProblemSpec spec = cfg.MakeProblem(data.datasets);
  harness::AuditOptions options;
  options.num_clients = cfg.num_clients;
  options.samples_per_client = cfg.samples_per_client;
  options.num_features = cfg.num_features;
  options.trials = cfg.trials;
  options.seed = cfg.seed;
  const auto report =
      harness::SensitivityAudit(spec, cfg.MakeAlgo(consensus::Variant::kZcdpNfl, 1.0), options);
  out << (report.pass() ? "PASS" : "FAIL") << " max_ratio=" << std::setprecision(6)
      << report.max_ratio << " trials=" << report.trials
      << " violations=" << report.violations << '\n';
  return report.pass() ? kExitOk : kExitRuntime;
}

int DoOracle(const Options& opt, std::ostream& out) {
  const auto cfg = Resolve(opt, false);
  const auto rep = harness::MakeReplicate(cfg, 0);
  out << std::setprecision(12);
  out << "problem=" << harness::ToString(cfg.problem) << " w_c=[";
  for (Eigen::Index i = 0; i < rep.reference.size(); ++i) {
    out << (i ? ", " : "") << rep.reference(i);
  }
  out << "]\n";
  return kExitOk;
}

}  // namespace

int ParseAndDispatch(const std::vector<std::string>& args, std::ostream& out,
                     std::ostream& err) {
  CLI::App app{"Private networked federated learning simulator", "fednet"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON experiment config");
    sub->add_option("--set", opt.overrides, "Override a config key (key=value)")
        ->take_all()
        ->allow_extra_args(false);
    sub->add_option("--seed", opt.seed, "Base seed");
    sub->add_option("--algo", opt.algos, "Comma-separated algorithm list");
    sub->add_option("--eps", opt.eps, "Comma-separated total epsilon values");
    sub->add_option("--delta", opt.delta, "Total delta");
    sub->add_option("--trials", opt.trials, "Sensitivity audit trials");
  };
  auto* run = app.add_subcommand("run", "Learning curves to curves.csv");
  auto* sweep = app.add_subcommand("sweep", "Privacy-accuracy sweep to sweep.csv");
  auto* audit = app.add_subcommand("audit", "Empirical l2 sensitivity audit");
  auto* oracle = app.add_subcommand("oracle", "Print the centralized solution");
  for (auto* sub : {run, sweep, audit, oracle}) add_common(sub);
  for (auto* sub : {run, sweep}) {
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_flag("--json", opt.emit_json, "Also write JSON mirrors");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    ApplyThreadCap();
    if (run->parsed()) return DoRun(opt, out);
    if (sweep->parsed()) return DoSweep(opt, out);
    if (audit->parsed()) return DoAudit(opt, out);
    return DoOracle(opt, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace fednet::cli

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
#include "fednet/config.h"

#include <fstream>
#include <set>

namespace fednet::config {
namespace {

using nlohmann::json;

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "problem", "K",      "M_k",          "P",       "avg_degree", "topology_seed",
      "noise_std", "lambda", "lambda1",    "lambda2", "c1",         "analytic_c1",
      "algos",   "rho",    "eta0",         "eta_exponent", "alpha0", "tau",
      "T",       "epsilon", "eps_grid",    "delta",   "n_seeds",    "seed",
      "trials"};
  return keys;
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParameterError(std::string(key) + ": invalid value " + j.at(key).dump());
  }
}

}  // namespace

harness::ExperimentConfig FromJson(const json& j) {
  Require(j.is_object(), "config: top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    Require(KnownKeys().count(key) == 1, "config: unknown key \"" + key + "\"");
  }
  harness::ExperimentConfig cfg;
  if (j.contains("problem")) {
    Require(j["problem"].is_string(), "problem: expected a string");
    cfg.problem = harness::ParseProblem(j["problem"].get<std::string>());
  }
  Read(j, "K", cfg.num_clients);
  Read(j, "M_k", cfg.samples_per_client);
  Read(j, "P", cfg.num_features);
  Read(j, "avg_degree", cfg.avg_degree);
  Read(j, "topology_seed", cfg.topology_seed);
  Read(j, "noise_std", cfg.noise_std);
  Read(j, "lambda", cfg.lambda);
  if (j.contains("lambda1")) {
    const json& v = j["lambda1"];
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "auto")) {
      cfg.lambda1.reset();
    } else {
      Require(v.is_number(), "lambda1: expected a number or \"auto\"");
      cfg.lambda1 = v.get<double>();
    }
  }
  Read(j, "lambda2", cfg.lambda2);
  Read(j, "c1", cfg.c1);
  Read(j, "analytic_c1", cfg.analytic_c1);
  if (j.contains("algos")) {
    const json& v = j["algos"];
    Require(v.is_array() || v.is_string(), "algos: expected a list of names");
    cfg.algos.clear();
    if (v.is_string()) {
      cfg.algos.push_back(consensus::ParseVariant(v.get<std::string>()));
    } else {
      for (const json& name : v) {
        Require(name.is_string(), "algos: expected a list of names");
        cfg.algos.push_back(consensus::ParseVariant(name.get<std::string>()));
      }
    }
  }
  Read(j, "rho", cfg.rho);
  Read(j, "eta0", cfg.eta0);
  Read(j, "eta_exponent", cfg.eta_exponent);
  if (j.contains("alpha0")) {
    const json& v = j["alpha0"];
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "matched")) {
      cfg.alpha0.reset();
    } else {
      Require(v.is_number(), "alpha0: expected a number or \"matched\"");
      cfg.alpha0 = v.get<double>();
    }
  }
  Read(j, "tau", cfg.tau);
  Read(j, "T", cfg.T);
  if (j.contains("epsilon")) {
    const json& v = j["epsilon"];
    if (v.is_null()) {
      cfg.epsilon.reset();
    } else {
      Require(v.is_number(), "epsilon: expected a number or null");
      cfg.epsilon = v.get<double>();
    }
  }
  Read(j, "eps_grid", cfg.eps_grid);
  Read(j, "delta", cfg.delta);
  Read(j, "n_seeds", cfg.n_seeds);
  Read(j, "seed", cfg.seed);
  Read(j, "trials", cfg.trials);
  cfg.Validate();
  return cfg;
}

json ToJson(const harness::ExperimentConfig& cfg) {
  json algos = json::array();
  for (auto v : cfg.algos) algos.push_back(consensus::ToString(v));
  json j = {
      {"problem", harness::ToString(cfg.problem)},
      {"K", cfg.num_clients},
      {"M_k", cfg.samples_per_client},
      {"P", cfg.num_features},
      {"avg_degree", cfg.avg_degree},
      {"topology_seed", cfg.topology_seed},
      {"noise_std", cfg.noise_std},
      {"lambda", cfg.lambda},
      {"lambda2", cfg.lambda2},
      {"c1", cfg.c1},
      {"analytic_c1", cfg.analytic_c1},
      {"algos", algos},
      {"rho", cfg.rho},
      {"eta0", cfg.eta0},
      {"eta_exponent", cfg.eta_exponent},
      {"tau", cfg.tau},
      {"T", cfg.T},
      {"eps_grid", cfg.eps_grid},
      {"delta", cfg.delta},
      {"n_seeds", cfg.n_seeds},
      {"seed", cfg.seed},
      {"trials", cfg.trials},
  };
  j["lambda1"] = cfg.lambda1 ? json(*cfg.lambda1) : json("auto");
  j["alpha0"] = cfg.alpha0 ? json(*cfg.alpha0) : json("matched");
  j["epsilon"] = cfg.epsilon ? json(*cfg.epsilon) : json(nullptr);
  return j;
}

harness::ExperimentConfig LoadFile(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), "config: cannot read \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParameterError("config: \"" + path + "\" is not valid JSON: " + e.what());
  }
  return FromJson(j);
}

void ApplyOverride(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  Require(eq != std::string_view::npos && eq > 0,
          "--set expects key=value, got \"" + std::string(assignment) + "\"");
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  Require(KnownKeys().count(key) == 1, "--set: unknown key \"" + key + "\"");
  json value = json::parse(raw, nullptr, false);
  j[key] = value.is_discarded() ? json(raw) : value;
}

}  // namespace fednet::config

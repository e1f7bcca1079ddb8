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
#include "fednet/report.h"

#include <iomanip>
#include <ostream>

#include "json.hpp"

namespace fednet::report {

void WriteCurvesCsv(std::ostream& out, std::span<const harness::ExperimentRecord> records) {
  out << "algo,seed,iter,normalized_error,objective_gap\n";
  out << std::setprecision(17);
  for (const auto& r : records) {
    out << r.algo << ',' << r.seed << ',' << r.iter << ',' << r.normalized_error << ','
        << r.objective_gap << '\n';
  }
}

void WriteSweepCsv(std::ostream& out, std::span<const harness::TradeoffRow> rows) {
  out << "algo,epsilon,final_error\n";
  out << std::setprecision(17);
  for (const auto& r : rows) out << r.algo << ',' << r.epsilon << ',' << r.final_error << '\n';
}

void WriteCurvesJson(std::ostream& out, std::span<const harness::ExperimentRecord> records) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : records) {
    j.push_back({{"algo", r.algo},
                 {"seed", r.seed},
                 {"iter", r.iter},
                 {"normalized_error", r.normalized_error},
                 {"objective_gap", r.objective_gap}});
  }
  out << j.dump(1) << '\n';
}

void WriteSweepJson(std::ostream& out, std::span<const harness::TradeoffRow> rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    j.push_back({{"algo", r.algo}, {"epsilon", r.epsilon}, {"final_error", r.final_error}});
  }
  out << j.dump(1) << '\n';
}

}  // namespace fednet::report

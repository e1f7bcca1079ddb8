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
#ifndef FEDNET_REPORT_H_
#define FEDNET_REPORT_H_

#include <iosfwd>
#include <span>

#include "fednet/harness.h"

namespace fednet::report {

// Header: algo,seed,iter,normalized_error,objective_gap
void WriteCurvesCsv(std::ostream& out, std::span<const harness::ExperimentRecord> records);
// Header: algo,epsilon,final_error
void WriteSweepCsv(std::ostream& out, std::span<const harness::TradeoffRow> rows);

// JSON arrays of objects with the same fields as the CSV columns.
void WriteCurvesJson(std::ostream& out, std::span<const harness::ExperimentRecord> records);
void WriteSweepJson(std::ostream& out, std::span<const harness::TradeoffRow> rows);

}  // namespace fednet::report

#endif  // FEDNET_REPORT_H_

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
#ifndef FEDNET_TOOLS_CLI_H_
#define FEDNET_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace fednet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Entry point for `fednet <run|sweep|audit|oracle> [flags]`. args excludes
// the program name. Returns the process exit code.
int ParseAndDispatch(const std::vector<std::string>& args, std::ostream& out,
                     std::ostream& err);

}  // namespace fednet::cli

#endif  // FEDNET_TOOLS_CLI_H_

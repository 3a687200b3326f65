// Copyright 2026 The sfc-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
// RunCli parses the arguments, runs one subcommand and maps failures onto
// exit codes: 0 success, 1 configuration or data error, 2 backend or
// transport failure, 3 errored-instance threshold exceeded. Results go to
// files under --out and to `out`; diagnostics go to `err`.

#ifndef SFC_TOOLS_CLI_H_
#define SFC_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace sfc::cli {

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace sfc::cli

#endif  // SFC_TOOLS_CLI_H_

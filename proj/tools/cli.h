//
// Copyright 2026 The xlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef XLP_TOOLS_CLI_H_
#define XLP_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace xlp::cli {

// Runs one command line. `args` excludes the program name. Returns 0 on
// success, 1 on a usage error and 2 on a data error.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Reads a flat "key = value" config and writes every artifact for one
// language pair into its output directory.
int RunPipeline(const std::string& config_path, std::ostream& out,
                std::ostream& err);

}  // namespace xlp::cli

#endif  // XLP_TOOLS_CLI_H_

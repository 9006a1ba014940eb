//
// Copyright 2026 The Causal Span Tagger Authors
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

#ifndef CAUSAL_TOOLS_CLI_H_
#define CAUSAL_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace causal::cli {

enum ExitCode {
  kOk = 0,
  kIoFailure = 1,
  kDataError = 2,
  kConfigError = 3,
  kDivergence = 4,
  kVersionError = 5,
};

// Runs one causaltag invocation; args[0] is the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace causal::cli

#endif  // CAUSAL_TOOLS_CLI_H_

// Copyright 2026 The DialogForge Authors.
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

// The dialogforge command line:
//
//   dialogforge segment  NOTES [--threshold T] [--out FILE]
//   dialogforge extract  NOTES --lexicon TSV [--out FILE]
//   dialogforge generate NOTES --lexicon TSV (--mock | --mock-script JSON |
//                        --backend http --endpoint URL --model NAME)
//                        [--mode short|long] [--config FILE] [--set k=v]...
//                        [--workers N] [--out FILE] [--print-config]
//   dialogforge evaluate HYP REF --lexicon TSV [--out FILE]
//
// Exit status is 0 when every record succeeded, 1 when any failed and 2 for
// usage errors. The API key is read from DIALOGFORGE_API_KEY only; the
// endpoint falls back to DIALOGFORGE_ENDPOINT.

#ifndef DIALOGFORGE_CLI_H_
#define DIALOGFORGE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dialogforge {

/// `args` excludes the program name. `out` receives records when no --out
/// file is given; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace dialogforge

#endif  // DIALOGFORGE_CLI_H_

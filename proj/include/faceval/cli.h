// Copyright 2026 The FacEval Authors.
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

// The faceval command line.
//
//   faceval build-probes  corpus -> probe file
//   faceval score         probe file + scorer -> factuality report
//   faceval corrupt       LDT / MDT training corpora
//   faceval meta          model series + metric scores -> rank correlations
//   faceval stats         corpus or annotation statistics
//   faceval baseline      ROUGE / BLEU over candidate-reference pairs
//
// Human-readable tables go to stdout, machine output to files, errors to
// stderr as {"error": kind, "message": text}.

#ifndef FACEVAL_CLI_H_
#define FACEVAL_CLI_H_

#include <iosfwd>
#include <span>
#include <string>

namespace faceval {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitServiceError = 2;

// `args` excludes the program name.
int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err);

}  // namespace faceval

#endif  // FACEVAL_CLI_H_

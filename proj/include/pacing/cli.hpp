// Copyright 2026 The Authors.
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

#ifndef PACING_CLI_HPP_
#define PACING_CLI_HPP_

namespace pacing {

// Full command-line entry point (commands: run, scale, demo-seq, fleet,
// oracle). Returns the process exit code: 0 ok, 2 configuration error,
// 3 modeling assumption violated, 4 runtime invariant violated.
int run_cli(int argc, const char* const* argv);

}  // namespace pacing

#endif  // PACING_CLI_HPP_

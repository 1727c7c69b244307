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

#pragma once

#include <stdexcept>
#include <string>

namespace pacing {

// Process exit codes. Library code throws one of the exception types
// below; the CLI entry point translates them.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAssumption = 3;
inline constexpr int kExitInvariant = 4;

// Bad user input: malformed config file, unknown flag value, invalid horizon.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An environment failed a structural precondition of an algorithm or oracle,
// e.g. a gradient curve with no zero crossing inside the scan range, or more
// than one.
class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bound that is supposed to hold on every realized run was breached.
// This is the "stop the world" error: it means the implementation (or the
// math it encodes) is wrong, not the input.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pacing

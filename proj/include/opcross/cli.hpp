// Copyright 2026 The opcross Authors.
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

// Batch front end: one verb per run, JSON problem file in, canonical JSON
// report (and optionally a CSV table) out.

#ifndef OPCROSS_CLI_HPP
#define OPCROSS_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "opcross/json_io.hpp"

namespace opcross::cli {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kToleranceEnv = "OPCROSS_TOL";

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

enum class Verb { dv, angle, equiv, cocycle, schwarz, riccati, hamiltonian, flow, selftest };

std::optional<Verb> parse_verb(std::string_view s);
std::string_view to_string(Verb v);

struct Command {
  Verb verb = Verb::selftest;
  std::string input_path;   // empty: no input (selftest) or stdin "-"
  std::string output_path;  // empty or "-": stdout
  std::string csv_path;     // empty: no CSV table
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
};

struct Outcome {
  int exit_code = kExitOk;
  std::string report;  // canonical JSON, newline terminated
  std::string csv;     // empty unless the verb produces a table
};

/// --tol, else the OPCROSS_TOL environment variable, else 1e-6.
double resolve_tolerance(const Command& cmd);

/// Runs one command on already-loaded input bytes. Never throws.
Outcome execute(const Command& cmd, std::string_view input);

/// Reads the input file, executes, writes the report and CSV. Returns the
/// exit status.
int run(const Command& cmd);

/// Canonical serialization of a report document.
std::string emit_report(const Json& report);

/// 64-bit FNV-1a digest of the input bytes, as "fnv1a64:<16 hex digits>".
std::string input_digest(std::string_view bytes);

/// Argument parsing front end shared by the executable.
int main(int argc, char** argv);

}  // namespace opcross::cli

#endif  // OPCROSS_CLI_HPP

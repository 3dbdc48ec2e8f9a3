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

#ifndef OPCROSS_ERROR_HPP
#define OPCROSS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace opcross {

enum class ErrorKind {
  Validation,
  DimensionMismatch,
  Singular,
  NonConvergence,
  RankDeficient,
  OutsideChart,
  NotComplementary,
  NotPolarization,
  DegeneratePosition,
  BlowUp,
  DefectiveSpectrum,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::OutsideChart: return "OutsideChart";
    case ErrorKind::NotComplementary: return "NotComplementary";
    case ErrorKind::NotPolarization: return "NotPolarization";
    case ErrorKind::DegeneratePosition: return "DegeneratePosition";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::DefectiveSpectrum: return "DefectiveSpectrum";
  }
  return "Unknown";
}

/// True for errors caused by malformed or inconsistent input rather than by
/// the numerics of otherwise valid data.
constexpr bool is_input_error(ErrorKind kind) {
  return kind == ErrorKind::Validation || kind == ErrorKind::DimensionMismatch;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) raise(kind, what);
}

}  // namespace opcross

#endif  // OPCROSS_ERROR_HPP

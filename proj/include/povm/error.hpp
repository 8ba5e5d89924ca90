// Copyright 2026 The povm-forge Authors
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

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace povm {

enum class ErrorKind {
  NotHermitian,
  NotPositiveDefinite,
  NotPSD,
  NotNormalized,
  DimensionMismatch,
  EmptyInput,
  MapSizeMismatch,
  OutOfRange,
  BadWeight,
  AllZero,
  ZeroEffect,
  NotRank1,
  NotADependence,
  DegenerateDependence,
  NotExtremal,
  NotExtremalRank1,
  InternalContradiction,
  NonConvergence,
  AlreadyMaximal,
  InSpan,
  BadDimension,
  SingularSum,
  UnknownExample,
  TargetMismatch,
  BadTolerance,
  Parse,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::MapSizeMismatch: return "MapSizeMismatch";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::BadWeight: return "BadWeight";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::ZeroEffect: return "ZeroEffect";
    case ErrorKind::NotRank1: return "NotRank1";
    case ErrorKind::NotADependence: return "NotADependence";
    case ErrorKind::DegenerateDependence: return "DegenerateDependence";
    case ErrorKind::NotExtremal: return "NotExtremal";
    case ErrorKind::NotExtremalRank1: return "NotExtremalRank1";
    case ErrorKind::InternalContradiction: return "InternalContradiction";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::AlreadyMaximal: return "AlreadyMaximal";
    case ErrorKind::InSpan: return "InSpan";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::SingularSum: return "SingularSum";
    case ErrorKind::UnknownExample: return "UnknownExample";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::BadTolerance: return "BadTolerance";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library. `outcome()` names the offending
/// effect index (0-based) when there is one; `residual()` carries the
/// measured quantity that broke the check, or NaN.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::size_t> outcome = std::nullopt,
        double residual = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        outcome_(outcome),
        residual_(residual) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> outcome() const noexcept { return outcome_; }
  double residual() const noexcept { return residual_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> outcome_;
  double residual_;
};

}  // namespace povm

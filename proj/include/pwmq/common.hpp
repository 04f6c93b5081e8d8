// Copyright 2026 The pwmq Authors
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

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace pwmq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Broad failure classes. The CLI prints them as `error:<name>:` and maps
/// numerical failures to exit status 2, everything else to 1.
enum class ErrorCategory {
  kValidation,
  kGrid,
  kAmplitudeBound,
  kCutoff,
  kRange,
  kScheme,
  kParse,
  kIo,
  kNumerical,
};

constexpr std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kValidation: return "validation";
    case ErrorCategory::kGrid: return "grid";
    case ErrorCategory::kAmplitudeBound: return "amplitude-bound";
    case ErrorCategory::kCutoff: return "cutoff";
    case ErrorCategory::kRange: return "range";
    case ErrorCategory::kScheme: return "scheme";
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kNumerical: return "numerical";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace pwmq

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

#include <string>
#include <vector>

#include "pwmq/common.hpp"

namespace pwmq {

/**
 * @brief Bilinear control system H(t) = H0 + sum_k u_k(t) H_k.
 *
 * Plain value type; it does not check itself on construction so that
 * malformed input can be reported by validate_system(). Every propagation
 * and optimisation entry point calls require_valid() first.
 */
struct ControlSystem {
  Matrix drift;
  std::vector<Matrix> controls;

  int dim() const { return static_cast<int>(drift.rows()); }
  int num_controls() const { return static_cast<int>(controls.size()); }

  /// H0 + sum_k u_k H_k.
  Matrix hamiltonian(const RealVector& u) const;
};

struct ValidationReport {
  bool ok = true;
  double max_hermiticity_residual = 0.0;
  std::vector<std::string> problems;

  std::string summary() const;
};

inline constexpr double kHermiticityTolerance = 1e-12;

ValidationReport validate_system(const ControlSystem& sys);

/// Throws Error(kValidation) carrying the report summary.
void require_valid(const ControlSystem& sys);

/// Ten-level molecular benchmark: drift diag(1, 5, 7, 8, 9, 10, 11, 11.8,
/// 12.1, 12.4) and a single control -mu with the dipole couplings folded in.
ControlSystem build_ten_level_system();

/// Driven qubit H0 = sigma_z, H1 = sigma_x used throughout the error-order
/// checks.
ControlSystem build_two_level_system();

/// Unit-norm state. Construction fails if |psi| deviates from 1 by more
/// than 1e-10.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes);

  static StateVector basis(int dim, int index);
  static StateVector normalized(const Vector& v);

  const Vector& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }

 private:
  Vector amplitudes_;
};

}  // namespace pwmq

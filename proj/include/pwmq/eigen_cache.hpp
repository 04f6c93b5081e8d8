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

#include <compare>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <vector>

#include "pwmq/model.hpp"

namespace pwmq {

struct SignedControl {
  int control;
  int sign;  // +1 or -1

  auto operator<=>(const SignedControl&) const = default;
};

/// H = basis * diag(eigvals) * basis^dagger.
struct EigEntry {
  Matrix hamiltonian;
  Matrix basis;
  Matrix basis_adjoint;
  RealVector eigvals;

  /// exp(-i theta H).
  Matrix exponential(double theta) const;
  /// exp(-i theta H) v without forming the matrix.
  Vector apply(double theta, const Vector& v) const;
};

EigEntry diagonalize(const Matrix& hermitian);

/**
 * @brief Lazily filled table of diagonalised bang-bang Hamiltonians
 * H0 + sum_n delta_n xi_n H_n.
 *
 * Keys are canonicalised by control index, so the table never exceeds the
 * 3^K members of the bang-bang Hamiltonian set. Lookups take a shared lock;
 * insertion takes the exclusive lock, and a racing insert keeps whichever
 * entry landed first (both are computed identically).
 */
class EigenCache {
 public:
  EigenCache(ControlSystem sys, RealVector amplitudes);

  std::shared_ptr<const EigEntry> get(std::span<const SignedControl> active) const;

  /// Assembled Hamiltonian for a set of active controls, no caching.
  Matrix hamiltonian(std::span<const SignedControl> active) const;

  size_t size() const;
  const ControlSystem& system() const { return sys_; }
  const RealVector& amplitudes() const { return amplitudes_; }

 private:
  ControlSystem sys_;
  RealVector amplitudes_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::vector<SignedControl>, std::shared_ptr<const EigEntry>> entries_;
};

}  // namespace pwmq

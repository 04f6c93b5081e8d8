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

#include "pwmq/eigen_cache.hpp"

#include <algorithm>
#include <mutex>

namespace pwmq {

Matrix EigEntry::exponential(double theta) const {
  const Eigen::VectorXcd phases =
      (eigvals.cast<Complex>() * (-kI * theta)).array().exp().matrix();
  return basis * phases.asDiagonal() * basis_adjoint;
}

Vector EigEntry::apply(double theta, const Vector& v) const {
  Vector tmp = basis_adjoint * v;
  for (Eigen::Index i = 0; i < tmp.size(); ++i)
    tmp(i) *= std::exp(-kI * (theta * eigvals(i)));
  return basis * tmp;
}

EigEntry diagonalize(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCategory::kNumerical, "Hermitian eigendecomposition failed");
  EigEntry e;
  e.hamiltonian = hermitian;
  e.basis = solver.eigenvectors();
  e.basis_adjoint = e.basis.adjoint();
  e.eigvals = solver.eigenvalues();
  return e;
}

EigenCache::EigenCache(ControlSystem sys, RealVector amplitudes)
    : sys_(std::move(sys)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != sys_.num_controls())
    throw Error(ErrorCategory::kValidation,
                "expected " + std::to_string(sys_.num_controls()) +
                    " amplitudes, got " + std::to_string(amplitudes_.size()));
}

Matrix EigenCache::hamiltonian(std::span<const SignedControl> active) const {
  Matrix h = sys_.drift;
  for (const auto& sc : active)
    h += (sc.sign * amplitudes_(sc.control)) * sys_.controls[sc.control];
  return h;
}

std::shared_ptr<const EigEntry> EigenCache::get(
    std::span<const SignedControl> active) const {
  std::vector<SignedControl> key(active.begin(), active.end());
  std::sort(key.begin(), key.end());
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto entry = std::make_shared<const EigEntry>(diagonalize(hamiltonian(key)));
  std::unique_lock lock(mutex_);
  return entries_.try_emplace(std::move(key), std::move(entry)).first->second;
}

size_t EigenCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace pwmq

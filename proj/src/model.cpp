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

#include "pwmq/model.hpp"

#include <cmath>
#include <sstream>

namespace pwmq {

Matrix ControlSystem::hamiltonian(const RealVector& u) const {
  Matrix h = drift;
  for (int k = 0; k < num_controls(); ++k) h += u(k) * controls[k];
  return h;
}

namespace {

double hermiticity_residual(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

std::string ValidationReport::summary() const {
  if (ok) return "ok";
  std::ostringstream os;
  for (size_t i = 0; i < problems.size(); ++i) {
    if (i) os << "; ";
    os << problems[i];
  }
  return os.str();
}

ValidationReport validate_system(const ControlSystem& sys) {
  ValidationReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.problems.push_back(std::move(msg));
  };

  const auto n = sys.drift.rows();
  if (sys.drift.cols() != n) {
    fail("drift is not square");
    return report;
  }
  if (n < 2) fail("dimension " + std::to_string(n) + " < 2");
  if (sys.controls.empty()) fail("no control Hamiltonians");

  auto check = [&](const Matrix& m, const std::string& name) {
    if (m.rows() != n || m.cols() != n) {
      fail(name + " has shape " + std::to_string(m.rows()) + "x" +
           std::to_string(m.cols()) + ", expected " + std::to_string(n) +
           "x" + std::to_string(n));
      return;
    }
    if (!m.allFinite()) {
      fail(name + " has non-finite entries");
      return;
    }
    if (n == 0) return;
    const double r = hermiticity_residual(m);
    report.max_hermiticity_residual =
        std::max(report.max_hermiticity_residual, r);
    if (r > kHermiticityTolerance) {
      std::ostringstream os;
      os << name << " is not Hermitian (max residual " << r << ")";
      fail(os.str());
    }
  };

  check(sys.drift, "drift");
  for (int k = 0; k < sys.num_controls(); ++k)
    check(sys.controls[k], "control[" + std::to_string(k) + "]");
  return report;
}

void require_valid(const ControlSystem& sys) {
  const auto report = validate_system(sys);
  if (!report.ok) throw Error(ErrorCategory::kValidation, report.summary());
}

ControlSystem build_ten_level_system() {
  constexpr int n = 10;
  const double energies[n] = {1, 5, 7, 8, 9, 10, 11, 11.8, 12.1, 12.4};

  RealMatrix mu = RealMatrix::Constant(n, n, 0.001);
  mu.diagonal().setZero();
  // 1-based couplings as tabulated for the benchmark.
  auto set = [&](int i, int j, double v) {
    mu(i - 1, j - 1) = v;
    mu(j - 1, i - 1) = v;
  };
  set(1, 2, 0.3);
  set(1, 3, 0.15);
  set(1, 4, 0.0);
  set(1, 7, 0.003);
  set(2, 3, 0.2);
  set(2, 4, 0.25);
  set(3, 4, 0.1);

  ControlSystem sys;
  sys.drift = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) sys.drift(i, i) = energies[i];
  // H(t) = H0 - mu eps(t), written as H0 + eps(t) H1 with H1 = -mu.
  sys.controls.push_back((-mu).cast<Complex>());
  return sys;
}

ControlSystem build_two_level_system() {
  ControlSystem sys;
  sys.drift = Matrix::Zero(2, 2);
  sys.drift(0, 0) = 1.0;
  sys.drift(1, 1) = -1.0;
  Matrix sx = Matrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  sys.controls.push_back(sx);
  return sys;
}

StateVector::StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0)
    throw Error(ErrorCategory::kValidation, "empty state vector");
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "state vector norm " << norm << " is not 1";
    throw Error(ErrorCategory::kValidation, os.str());
  }
}

StateVector StateVector::basis(int dim, int index) {
  if (index < 0 || index >= dim)
    throw Error(ErrorCategory::kRange, "basis index " + std::to_string(index) +
                                           " outside [0, " +
                                           std::to_string(dim) + ")");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::normalized(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0))
    throw Error(ErrorCategory::kValidation, "cannot normalise a zero vector");
  return StateVector(v / norm);
}

}  // namespace pwmq

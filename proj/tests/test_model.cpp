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

#include <gtest/gtest.h>

#include "pwmq/model.hpp"

namespace pwmq {
namespace {

TEST(ControlSystemTest, HamiltonianIsAffineInControls) {
  const ControlSystem sys = build_two_level_system();
  RealVector u(1);
  u << 0.3;
  const Matrix expected = sys.drift + 0.3 * sys.controls[0];
  EXPECT_LT((sys.hamiltonian(u) - expected).norm(), 1e-15);
}

TEST(ValidateTest, AcceptsBuiltins) {
  EXPECT_TRUE(validate_system(build_two_level_system()).ok);
  const auto report = validate_system(build_ten_level_system());
  EXPECT_TRUE(report.ok) << report.summary();
  EXPECT_LE(report.max_hermiticity_residual, kHermiticityTolerance);
}

TEST(ValidateTest, RejectsNonHermitianControl) {
  ControlSystem sys = build_two_level_system();
  sys.controls[0](0, 1) = Complex(1.0, 0.5);
  const auto report = validate_system(sys);
  EXPECT_FALSE(report.ok);
  EXPECT_GT(report.max_hermiticity_residual, 0.1);
  try {
    require_valid(sys);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kValidation);
  }
}

TEST(ValidateTest, RejectsShapeProblems) {
  ControlSystem sys = build_two_level_system();
  sys.controls.push_back(Matrix::Identity(3, 3));
  EXPECT_FALSE(validate_system(sys).ok);

  ControlSystem none = build_two_level_system();
  none.controls.clear();
  EXPECT_FALSE(validate_system(none).ok);

  ControlSystem tiny;
  tiny.drift = Matrix::Zero(1, 1);
  tiny.controls.push_back(Matrix::Zero(1, 1));
  EXPECT_FALSE(validate_system(tiny).ok);

  ControlSystem rect = build_two_level_system();
  rect.drift = Matrix::Zero(2, 3);
  EXPECT_FALSE(validate_system(rect).ok);
}

TEST(ValidateTest, RejectsNonFinite) {
  ControlSystem sys = build_two_level_system();
  sys.drift(0, 0) = Complex(std::nan(""), 0.0);
  EXPECT_FALSE(validate_system(sys).ok);
}

TEST(TenLevelTest, DriftEnergiesAndTransitions) {
  const ControlSystem sys = build_ten_level_system();
  ASSERT_EQ(sys.dim(), 10);
  ASSERT_EQ(sys.num_controls(), 1);
  const double energies[10] = {1, 5, 7, 8, 9, 10, 11, 11.8, 12.1, 12.4};
  for (int i = 0; i < 10; ++i) {
    EXPECT_DOUBLE_EQ(sys.drift(i, i).real(), energies[i]);
    for (int j = 0; j < 10; ++j)
      if (i != j) {
        EXPECT_EQ(sys.drift(i, j), Complex(0.0));
      }
  }
  // The two transitions the optimised field is expected to drive.
  EXPECT_DOUBLE_EQ(energies[1] - energies[0], 4.0);
  EXPECT_DOUBLE_EQ(energies[3] - energies[1], 3.0);
}

TEST(TenLevelTest, DipoleStructure) {
  const Matrix h1 = build_ten_level_system().controls[0];
  // No direct |1> <-> |4> coupling; the transfer has to go through |2>.
  EXPECT_EQ(h1(0, 3), Complex(0.0));
  EXPECT_NE(h1(0, 1), Complex(0.0));
  EXPECT_NE(h1(1, 3), Complex(0.0));
  EXPECT_LT((h1 - h1.adjoint()).norm(), 1e-15);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(h1(i, i), Complex(0.0));
}

TEST(StateVectorTest, BasisAndNormalisation) {
  const StateVector b = StateVector::basis(4, 2);
  EXPECT_EQ(b.dim(), 4);
  EXPECT_EQ(b.amplitudes()(2), Complex(1.0));
  Vector v(2);
  v << Complex(3.0, 0.0), Complex(0.0, 4.0);
  EXPECT_NEAR(StateVector::normalized(v).amplitudes().norm(), 1.0, 1e-15);
  EXPECT_THROW(StateVector{v}, Error);
  EXPECT_THROW(StateVector::basis(3, 3), Error);
  EXPECT_THROW(StateVector::normalized(Vector::Zero(2)), Error);
}

}  // namespace
}  // namespace pwmq

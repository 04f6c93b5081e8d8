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

#include "pwmq/common.hpp"

namespace pwmq::dft {

// Unnormalised transforms of arbitrary length, backed by FFTW.
//   forward:  X_n = sum_j x_j exp(-2 pi i j n / S)
//   inverse:  x_j = sum_n X_n exp(+2 pi i j n / S)
Eigen::VectorXcd forward(const Eigen::VectorXcd& x);
Eigen::VectorXcd inverse(const Eigen::VectorXcd& x);

}  // namespace pwmq::dft

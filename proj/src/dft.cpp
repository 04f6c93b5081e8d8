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

#include "pwmq/dft.hpp"

#include <fftw3.h>

#include <mutex>

namespace pwmq::dft {

namespace {

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex planner_mutex;

Eigen::VectorXcd transform(const Eigen::VectorXcd& x, int sign) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXcd in = x;
  Eigen::VectorXcd out(n);
  if (n == 0) return out;

  auto* in_ptr = reinterpret_cast<fftw_complex*>(in.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw Error(ErrorCategory::kNumerical, "FFTW planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

Eigen::VectorXcd forward(const Eigen::VectorXcd& x) {
  return transform(x, FFTW_FORWARD);
}

Eigen::VectorXcd inverse(const Eigen::VectorXcd& x) {
  return transform(x, FFTW_BACKWARD);
}

}  // namespace pwmq::dft

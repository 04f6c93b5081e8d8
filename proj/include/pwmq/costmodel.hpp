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

#include <cstdint>
#include <vector>

namespace pwmq {

/// N: dimension, K: controls, p: order of the truncated exponential series.
struct CostParams {
  std::int64_t n = 2;
  std::int64_t k = 1;
  std::int64_t p = 2;
};

/// Throws Error(kValidation) unless N >= 2, K >= 1, p >= 2.
void check_cost_params(const CostParams& c);

/// Multiplications per PWC step: (p - 1) N^3 + K N^2.
std::int64_t cost_pwc(const CostParams& c);

/// Multiplications per PWM step with cached eigendecompositions:
/// (2K - 1) N^3 + (2K - 1) N^2 + (p - 1) K N. SPO costs the same.
std::int64_t cost_pwm(const CostParams& c);
inline std::int64_t cost_spo(const CostParams& c) { return cost_pwm(c); }

/// cost_pwm / cost_pwc.
double gamma_ratio(const CostParams& c);

/// Real p at which the two costs are equal for fixed N and K. Returns a
/// negative value when no boundary exists (N^3 <= K N).
double gamma_boundary(std::int64_t n, std::int64_t k);

struct GammaCell {
  std::int64_t n;
  std::int64_t p;
  double gamma;
};

struct BoundaryPoint {
  std::int64_t n;
  double p_boundary;
};

struct GammaGrid {
  std::int64_t k = 1;
  std::vector<GammaCell> cells;       // N outer, p inner
  std::vector<BoundaryPoint> contour;  // gamma = 1 where it falls inside [pmin, pmax]

  bool has_below_one() const;
  bool has_above_one() const;
};

/// Every integer N in [n_min, n_max] and p in [p_min, p_max].
GammaGrid gamma_grid(std::int64_t n_min, std::int64_t n_max, std::int64_t p_min,
                     std::int64_t p_max, std::int64_t k);

}  // namespace pwmq

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

#include "pwmq/costmodel.hpp"

#include <algorithm>
#include <sstream>

#include "pwmq/common.hpp"

namespace pwmq {

void check_cost_params(const CostParams& c) {
  if (c.n < 2 || c.k < 1 || c.p < 2) {
    std::ostringstream os;
    os << "cost model needs N >= 2, K >= 1, p >= 2 (got N=" << c.n << ", K=" << c.k
       << ", p=" << c.p << ")";
    throw Error(ErrorCategory::kValidation, os.str());
  }
}

std::int64_t cost_pwc(const CostParams& c) {
  check_cost_params(c);
  const std::int64_t n2 = c.n * c.n;
  return (c.p - 1) * n2 * c.n + c.k * n2;
}

std::int64_t cost_pwm(const CostParams& c) {
  check_cost_params(c);
  const std::int64_t n2 = c.n * c.n;
  return (2 * c.k - 1) * (n2 * c.n + n2) + (c.p - 1) * c.k * c.n;
}

double gamma_ratio(const CostParams& c) {
  return static_cast<double>(cost_pwm(c)) / static_cast<double>(cost_pwc(c));
}

double gamma_boundary(std::int64_t n, std::int64_t k) {
  // (p - 1)(N^3 - K N) = (2K - 1)(N^3 + N^2) - K N^2
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double denom = nd * nd * nd - kd * nd;
  if (denom <= 0.0) return -1.0;
  const double numer = (2 * kd - 1) * (nd * nd * nd + nd * nd) - kd * nd * nd;
  return 1.0 + numer / denom;
}

bool GammaGrid::has_below_one() const {
  return std::any_of(cells.begin(), cells.end(), [](const GammaCell& c) { return c.gamma < 1.0; });
}

bool GammaGrid::has_above_one() const {
  return std::any_of(cells.begin(), cells.end(), [](const GammaCell& c) { return c.gamma > 1.0; });
}

GammaGrid gamma_grid(std::int64_t n_min, std::int64_t n_max, std::int64_t p_min,
                     std::int64_t p_max, std::int64_t k) {
  if (n_min > n_max || p_min > p_max)
    throw Error(ErrorCategory::kValidation, "empty N or p range");
  check_cost_params({n_min, k, p_min});
  GammaGrid grid;
  grid.k = k;
  for (std::int64_t n = n_min; n <= n_max; ++n) {
    for (std::int64_t p = p_min; p <= p_max; ++p)
      grid.cells.push_back({n, p, gamma_ratio({n, k, p})});
    const double pb = gamma_boundary(n, k);
    if (pb >= static_cast<double>(p_min) && pb <= static_cast<double>(p_max))
      grid.contour.push_back({n, pb});
  }
  return grid;
}

}  // namespace pwmq

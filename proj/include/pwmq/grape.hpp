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
#include <string>
#include <vector>

#include "pwmq/model.hpp"
#include "pwmq/propagate.hpp"
#include "pwmq/pwm.hpp"

namespace pwmq {

/// State-transfer problem on a fixed PWM grid of M = T / tau subintervals.
struct GrapeProblem {
  ControlSystem system;
  StateVector initial;
  StateVector target;
  double total_time;
  double tau;
  RealVector amplitudes;

  /// Checks the system, state dimensions, amplitudes and T / tau; returns M.
  int intervals() const;
};

/// Ten-level benchmark: |1> -> |4>, T = 100, tau = 0.1, xi = 1.
GrapeProblem ten_level_problem();

struct GrapeOptions {
  int max_iterations = 5000;
  double initial_step = 0.01;
  double width_bound = 0.0;  // <= 0 means tau
  double tolerance = 1e-3;
  std::uint64_t rng_seed = 1;
  double step_growth = 2.0;  // applied after every accepted step
  int max_backtracks = 60;
};

struct GrapeResult {
  RealMatrix widths;
  std::vector<double> trace;  // J before the first step and after each step
  int iterations = 0;
  double wall_time = 0.0;
  bool converged = false;
  std::string stop_reason;
};

/// J = 1 - |<psi_f| U |psi_i>|^2.
double infidelity(const Matrix& u, const StateVector& initial,
                  const StateVector& target);

struct GradientResult {
  double infidelity = 1.0;
  RealMatrix gradient;       // K x M, dJ/dw
  bool tie_warning = false;  // some subinterval sits on a sort-order tie
};

/// Objective over a K x M width array, with the projection box |w| <= bound.
class GrapeObjective {
 public:
  virtual ~GrapeObjective() = default;
  virtual double value(const RealMatrix& widths) = 0;
  virtual GradientResult evaluate(const RealMatrix& widths) = 0;
  virtual int controls() const = 0;
  virtual int intervals() const = 0;
  virtual double tau() const = 0;
};

/**
 * @brief Infidelity of the PWM-propagated state and its exact gradient with
 * respect to the signed widths.
 *
 * Each width enters its subinterval's palindromic product linearly through
 * the dwell times once the sort order is fixed, so the gradient is a sum of
 * forward-state / costate sandwiches of the level Hamiltonians. Forward
 * states are stored; costates are swept backwards.
 */
class PwmObjective final : public GrapeObjective {
 public:
  explicit PwmObjective(GrapeProblem problem, bool use_cache = true);

  double value(const RealMatrix& widths) override;
  GradientResult evaluate(const RealMatrix& widths) override;
  int controls() const override { return problem_.system.num_controls(); }
  int intervals() const override { return intervals_; }
  double tau() const override { return problem_.tau; }

  /// Final propagator U_T for the given widths.
  Matrix propagator(const RealMatrix& widths) const;

 private:
  std::vector<PulseFrame> frames(const RealMatrix& widths, bool* tie) const;

  GrapeProblem problem_;
  int intervals_;
  PwmPropagator prop_;
};

/**
 * @brief Basic piecewise-constant GRAPE.
 *
 * Parameters are the same widths, read as the amplitudes u = xi w / tau held
 * over each subinterval. The gradient is the usual first-order one,
 * dU_m/du ~ -i tau H_k U_m.
 */
class PwcObjective final : public GrapeObjective {
 public:
  explicit PwcObjective(GrapeProblem problem);

  double value(const RealMatrix& widths) override;
  GradientResult evaluate(const RealMatrix& widths) override;
  int controls() const override { return problem_.system.num_controls(); }
  int intervals() const override { return intervals_; }
  double tau() const override { return problem_.tau; }

 private:
  GrapeProblem problem_;
  int intervals_;
};

/// PWM gradient of J at the given widths.
GradientResult gradient(const GrapeProblem& problem, const RealMatrix& widths);

/// Uniform random field in [-half_range, half_range] per subinterval,
/// converted to widths with xi = 1.
RealMatrix random_initial_widths(const GrapeProblem& problem, std::uint64_t seed,
                                 double half_range = 0.5);

/// Projected gradient descent with backtracking: halve the step until J
/// decreases, clip every width to [-bound, bound].
GrapeResult optimize(GrapeObjective& objective, const RealMatrix& initial_widths,
                     const GrapeOptions& options);
GrapeResult optimize(const GrapeProblem& problem, const RealMatrix& initial_widths,
                     const GrapeOptions& options);
/// Starts from random_initial_widths(problem, options.rng_seed).
GrapeResult optimize(const GrapeProblem& problem, const GrapeOptions& options);

struct BenchmarkOptions {
  int repeats = 25;
  std::uint64_t seed = 1;
  GrapeOptions grape;
  int jobs = 1;
  bool include_pwc = true;
  double peak_window = 0.5;  // +/- rad/time around the expected transitions
};

struct BenchmarkRun {
  int run = 0;
  std::string scheme;
  int iterations = 0;
  double final_infidelity = 1.0;
  double wall_seconds = 0.0;
  bool converged = false;
  RealMatrix widths;
  std::vector<SpectralPeak> peaks;  // two dominant peaks of the PWC field
};

struct BenchmarkReport {
  std::vector<BenchmarkRun> runs;
  double median_pwm_seconds = 0.0;
  double median_pwc_seconds = 0.0;
  int converged_pwm = 0;
  int converged_pwc = 0;
  int physics_matches = 0;  // converged PWM runs whose peaks match

  double speed_ratio() const {
    return median_pwc_seconds > 0 ? median_pwm_seconds / median_pwc_seconds : 0.0;
  }
};

/// Spectrum of the PWC field u = xi w / tau reconstructed from widths.
Spectrum reconstructed_spectrum(const GrapeProblem& problem, const RealMatrix& widths);

/// True if the two largest peaks sit within `window` of the two expected
/// frequencies, in either order.
bool peaks_match(const std::vector<SpectralPeak>& peaks, double first,
                 double second, double window);

/// Transition frequencies |1>->|2> and |2>->|4> of the ten-level drift.
inline constexpr double kTenLevelTransition12 = 4.0;
inline constexpr double kTenLevelTransition24 = 3.0;

/// Runs PWM-GRAPE and (optionally) PWC-GRAPE from the same seeded random
/// starts. Non-converged runs are kept as censored samples.
BenchmarkReport run_fig5_benchmark(const GrapeProblem& problem,
                                   const BenchmarkOptions& options);

}  // namespace pwmq

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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pwmq/eigen_cache.hpp"
#include "pwmq/model.hpp"
#include "pwmq/pwm.hpp"

namespace pwmq {

/// exp(-i theta H) by eigendecomposition. H must be Hermitian.
Matrix expm_hermitian(const Matrix& h, double theta);

/// ||U^dagger U - I||_F.
double unitarity_defect(const Matrix& u);

/**
 * @brief Sorted view of one PWM subinterval.
 *
 * order lists the controls with non-zero width, widest first (ties by
 * ascending index). dwell has order.size() + 1 entries: dwell[0] is spent
 * under the drift alone on each side of the pulse block, dwell[j] under the
 * drift plus the j widest pulses, and the last entry is the central block
 * where every listed control is on. The propagator is the palindrome
 *   F0 F1 ... F_last ... F1 F0,   F_j = exp(-i dwell[j] G_j).
 */
struct PulseFrame {
  double tau = 0.0;
  std::vector<int> order;
  std::vector<int> signs;  // one per control, in {-1, 0, +1}
  std::vector<double> dwell;

  /// 2 (dwell[0] + ... + dwell[last-1]) + dwell[last].
  double total() const;
  /// Time control k spends switched on inside the frame.
  double active_time(int control) const;
  /// Two listed controls whose |w| differ by less than tol.
  bool has_tie(double tol = 1e-9) const;
};

/// Frame from one column of widths. keep_zero_widths lists zero-width
/// controls at the end with sign +1 (a zero dwell that the gradient needs).
PulseFrame build_frame(std::span<const double> widths, double tau,
                       bool keep_zero_widths = false);
PulseFrame build_frame(const PwmSequence& seq, int interval);

/// One exponential of the palindromic product.
struct PwmFactor {
  std::shared_ptr<const EigEntry> entry;
  double duration;  // signed
};

/**
 * @brief PWM short-time propagator with optional eigendecomposition cache.
 *
 * With the cache disabled every factor is exponentiated from scratch, which
 * serves as the cross-check for the cached path.
 */
class PwmPropagator {
 public:
  PwmPropagator(ControlSystem sys, RealVector amplitudes, bool use_cache = true);

  /// Factors in application order (first applied first). time_sign = -1
  /// runs the frame backwards in time.
  std::vector<PwmFactor> factors(const PulseFrame& frame,
                                 double time_sign = 1.0) const;

  Matrix step(const PulseFrame& frame, double time_sign = 1.0) const;

  const ControlSystem& system() const { return cache_.system(); }
  const RealVector& amplitudes() const { return cache_.amplitudes(); }
  const EigenCache& cache() const { return cache_; }
  bool uses_cache() const { return use_cache_; }

 private:
  EigenCache cache_;
  bool use_cache_;
};

Matrix step_pwm(const ControlSystem& sys, const RealVector& amplitudes,
                const PulseFrame& frame);

/// exp(-i tau H(t')) with the amplitudes u sampled at the subinterval midpoint.
Matrix step_pwc(const ControlSystem& sys, const RealVector& u, double tau);

/// Symmetric Strang product over drift and control terms, each control
/// factor scaled by its midpoint amplitude.
Matrix step_spo(const ControlSystem& sys, const RealVector& u, double tau);

/// s = 1 / (2 - 2^{1/(2n-1)}) for the recursion level raising the order to
/// 2n. Requires n >= 2.
double suzuki_coefficient(int n);

/// S_2n on subinterval `interval` with widths scaled in proportion to each
/// sub-step.
Matrix step_pwm_higher(const PwmPropagator& prop, const PwmSequence& seq,
                       int interval, int n);

/// S_2n over [t_start, t_start + tau]; every sub-window gets widths from the
/// field's own area over that window. tau may be negative.
Matrix step_pwm_higher(const PwmPropagator& prop, const ControlField& field,
                       double t_start, double tau, int n);

/// Ordered product of midpoint exponentials with `resolution` steps over
/// [t0, t1].
Matrix reference_propagator(const ControlSystem& sys, const ControlField& field,
                            double t0, double t1, int resolution = 10000);

enum class SchemeKind { kPwc, kSpo, kPwm, kPwmHigher };

struct Scheme {
  SchemeKind kind = SchemeKind::kPwm;
  int order = 1;  // n of S_2n; only read for kPwmHigher

  static Scheme pwc() { return {SchemeKind::kPwc, 1}; }
  static Scheme spo() { return {SchemeKind::kSpo, 1}; }
  static Scheme pwm() { return {SchemeKind::kPwm, 1}; }
  static Scheme pwm_higher(int n) { return {SchemeKind::kPwmHigher, n}; }

  /// "pwc", "spo", "pwm", "pwm2n" (order supplied separately) or "pwm4",
  /// "pwm6", ...
  static Scheme parse(const std::string& name, int order = 2);
  std::string name() const;
};

struct EvolveOptions {
  bool use_cache = true;
};

/// U(T, 0) for a bang-bang sequence. Only the PWM schemes accept one.
Matrix evolve(const ControlSystem& sys, const Scheme& scheme,
              const PwmSequence& seq, const EvolveOptions& options = {});

/// U(T, 0) for a continuous field split into subintervals of length tau.
/// PWM schemes need `amplitudes`.
Matrix evolve(const ControlSystem& sys, const Scheme& scheme,
              const ControlField& field, double total_time, double tau,
              const RealVector* amplitudes = nullptr,
              const EvolveOptions& options = {});

/// Single-step propagator of `scheme` over [t_start, t_start + tau].
Matrix scheme_step(const ControlSystem& sys, const Scheme& scheme,
                   const ControlField& field, double t_start, double tau,
                   const RealVector* amplitudes = nullptr);

struct ErrorOrderOptions {
  double t_start = 1.0;          // local errors: step over [t_start, t_start + tau]
  int resolution = 10000;        // reference steps per tau (local)
  double total_time = 10.0;      // global errors
  int global_resolution = 200000;
  RealVector amplitudes;         // PWM schemes; defaults to all ones
};

struct ErrorOrderFit {
  std::vector<double> taus;
  std::vector<double> errors;
  double slope = 0.0;
  double intercept = 0.0;
  bool saturated = false;  // every error under 1e-13; slope meaningless
};

/// Least-squares slope of log ||U_scheme - U_ref||_F against log tau for a
/// single step.
ErrorOrderFit error_order(const ControlSystem& sys, const Scheme& scheme,
                          const ControlField& field, std::span<const double> taus,
                          const ErrorOrderOptions& options = {});

/// Same fit for the accumulated error over [0, total_time].
ErrorOrderFit global_error_order(const ControlSystem& sys, const Scheme& scheme,
                                 const ControlField& field,
                                 std::span<const double> taus,
                                 const ErrorOrderOptions& options = {});

}  // namespace pwmq

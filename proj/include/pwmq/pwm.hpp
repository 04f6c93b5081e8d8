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

#include <functional>
#include <vector>

#include "pwmq/common.hpp"

namespace pwmq {

/**
 * @brief Uniformly sampled control amplitudes.
 *
 * values is K x S; sample j sits at the midpoint time (j + 1/2) dt, so the
 * field covers [0, S dt].
 */
struct SampledField {
  double dt = 0.0;
  RealMatrix values;

  int controls() const { return static_cast<int>(values.rows()); }
  int samples() const { return static_cast<int>(values.cols()); }
  double duration() const { return dt * samples(); }
  double time(int j) const { return (j + 0.5) * dt; }

  /// Samples fn at the midpoint grid of [0, duration].
  static SampledField from_function(
      const std::function<RealVector(double)>& fn, int controls, double dt,
      int samples);
};

/// Throws Error(kValidation) unless dt > 0, S >= 1, K >= 1 and all values
/// are finite.
void check_field(const SampledField& field);

/**
 * @brief Bang-bang pulse sequence.
 *
 * One centred pulse per control per subinterval; widths(k, m) carries the
 * sign of the pulse, |widths(k, m)| <= tau. Subinterval m (0-based) is
 * centred at (m + 1/2) tau.
 */
struct PwmSequence {
  double tau = 0.0;
  RealVector amplitudes;
  RealMatrix widths;

  int controls() const { return static_cast<int>(widths.rows()); }
  int intervals() const { return static_cast<int>(widths.cols()); }
  double duration() const { return tau * intervals(); }
  double center(int m) const { return (m + 0.5) * tau; }
};

/// One-sided amplitude spectrum. A unit sinusoid on an on-grid frequency
/// produces |amp| = 1 at that bin.
struct Spectrum {
  RealVector omega;
  Eigen::VectorXcd amp;
  int samples = 0;  // length of the source record

  int size() const { return static_cast<int>(omega.size()); }
  double spacing() const { return size() > 1 ? omega(1) - omega(0) : 0.0; }
  double magnitude(int i) const { return std::abs(amp(i)); }
  /// pi - arg(amp), the phase of the sin(omega t + phi) expansion.
  double phase(int i) const;
  /// Index of the grid point closest to w.
  int bin(double w) const;
  /// Time-domain energy sum |u|^2 dt reproduced from the coefficients
  /// (Parseval under the one-sided normalisation).
  double energy() const;
  /// Energy carried by bins with omega > cutoff.
  double energy_above(double cutoff) const;
};

struct SpectralPeak {
  double omega;
  double magnitude;
};

/// Local maxima of |amp| (DC excluded), largest first, with any peak within
/// min_separation of a larger one discarded.
std::vector<SpectralPeak> dominant_peaks(const Spectrum& spec, int count,
                                         double min_separation);

/// Widths from the area of each control over each subinterval,
/// w = (1/xi) * integral, by midpoint-rule summation of the samples.
PwmSequence pwm_approximate(const SampledField& field,
                            const RealVector& amplitudes, double tau);

/// 1.05 * max_t |u_k(t)| per control; 1.0 for an identically zero control.
RealVector default_amplitudes(const SampledField& field);

/// M = ceil(cutoff / omega_min) + 1.
int intervals_for_cutoff(double cutoff, double omega_min);

/// Rectangular train of control k sampled at sample_rate (samples per unit
/// time) over [0, M tau]. A sample on a pulse edge takes the pulse value.
SampledField pwm_signal(const PwmSequence& seq, int control,
                        double sample_rate);

/// u_k = xi_k w_k / tau on each subinterval, one sample per subinterval.
SampledField inverse_pwm_pwc(const PwmSequence& seq);

/// Gaussian pulse train xi sgn(w) exp(-pi (t - t_m)^2 / w^2); each pulse has
/// the same area as its rectangular counterpart.
SampledField gaussian_train(const PwmSequence& seq, int control,
                            double sample_rate);

/// Ideal low-pass: zero every DFT bin with |omega| > cutoff.
SampledField lowpass_reconstruct(const SampledField& field, double cutoff);

Spectrum spectrum(const SampledField& field, int control);

/**
 * @brief Continuous-time view of a control field.
 *
 * Propagators need the amplitude at arbitrary times and the exact area over
 * arbitrary (possibly reversed) windows. integral(a, b) is oriented: it
 * changes sign when a > b.
 */
class ControlField {
 public:
  virtual ~ControlField() = default;
  virtual int controls() const = 0;
  virtual RealVector value(double t) const = 0;
  virtual RealVector integral(double a, double b) const = 0;
};

/// Analytic field. Integrals use composite 10-point Gauss-Legendre.
class FunctionField final : public ControlField {
 public:
  FunctionField(std::function<RealVector(double)> fn, int controls,
                double max_panel = 0.25);

  int controls() const override { return controls_; }
  RealVector value(double t) const override { return fn_(t); }
  RealVector integral(double a, double b) const override;

 private:
  std::function<RealVector(double)> fn_;
  int controls_;
  double max_panel_;
};

/// Sample-and-hold reading of a SampledField: sample j is constant on
/// [j dt, (j + 1) dt]; outside [0, T] the edge samples are held.
class HeldField final : public ControlField {
 public:
  explicit HeldField(SampledField field);

  int controls() const override { return field_.controls(); }
  RealVector value(double t) const override;
  RealVector integral(double a, double b) const override;

  const SampledField& field() const { return field_; }

 private:
  RealVector primitive(double t) const;

  SampledField field_;
  RealMatrix cumulative_;  // K x (S + 1) running sums times dt
};

}  // namespace pwmq

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

#include "pwmq/pwm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pwmq/dft.hpp"

namespace pwmq {

namespace {

constexpr double kPi = std::numbers::pi;

// Gaussian tails beyond this many widths are below 1e-49 of the peak.
constexpr double kGaussianSupport = 6.0;

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void check_control(int control, int count) {
  if (control < 0 || control >= count)
    throw Error(ErrorCategory::kRange,
                "control index " + std::to_string(control + 1) +
                    " outside 1.." + std::to_string(count));
}

void check_sequence(const PwmSequence& seq) {
  if (!(seq.tau > 0.0) || !std::isfinite(seq.tau))
    throw Error(ErrorCategory::kValidation, "tau must be positive");
  if (seq.intervals() < 1 || seq.controls() < 1)
    throw Error(ErrorCategory::kValidation, "empty pulse sequence");
  if (seq.amplitudes.size() != seq.controls())
    throw Error(ErrorCategory::kValidation,
                "amplitude count does not match control count");
  if (!seq.widths.allFinite())
    throw Error(ErrorCategory::kValidation, "non-finite pulse width");
}

// Samples of the output grid for a sequence rendered at sample_rate.
int rendered_samples(const PwmSequence& seq, double sample_rate) {
  if (!(sample_rate > 0.0))
    throw Error(ErrorCategory::kGrid, "sample rate must be positive");
  if (sample_rate * seq.tau < 10.0 * (1.0 - 1e-12))
    throw Error(ErrorCategory::kGrid,
                "sample rate resolves fewer than 10 samples per subinterval");
  return static_cast<int>(std::llround(seq.duration() * sample_rate));
}

// 10-point Gauss-Legendre on [-1, 1].
constexpr double kGlNodes[5] = {0.1488743389816312, 0.4333953941292472,
                                0.6794095682990244, 0.8650633666889845,
                                0.9739065285171717};
constexpr double kGlWeights[5] = {0.2955242247147529, 0.2692667193099963,
                                  0.2190863625159820, 0.1494513491505806,
                                  0.0666713443086881};

}  // namespace

SampledField SampledField::from_function(
    const std::function<RealVector(double)>& fn, int controls, double dt,
    int samples) {
  SampledField f;
  f.dt = dt;
  f.values.resize(controls, samples);
  for (int j = 0; j < samples; ++j) f.values.col(j) = fn(f.time(j));
  return f;
}

void check_field(const SampledField& field) {
  if (!(field.dt > 0.0) || !std::isfinite(field.dt))
    throw Error(ErrorCategory::kValidation, "sample spacing must be positive");
  if (field.samples() < 1 || field.controls() < 1)
    throw Error(ErrorCategory::kValidation, "field has no samples");
  if (!field.values.allFinite())
    throw Error(ErrorCategory::kValidation, "field has non-finite samples");
}

double Spectrum::phase(int i) const { return kPi - std::arg(amp(i)); }

int Spectrum::bin(double w) const {
  if (size() == 0) return -1;
  if (size() == 1) return 0;
  const long idx = std::lround((w - omega(0)) / spacing());
  return static_cast<int>(std::clamp<long>(idx, 0, size() - 1));
}

namespace {

// Weight turning |amp|^2 into the bin's share of the mean square.
double parseval_weight(const Spectrum& s, int i) {
  if (i == 0) return 1.0;
  const bool nyquist = (s.samples % 2 == 0) && i == s.size() - 1;
  return nyquist ? 1.0 : 0.5;
}

}  // namespace

double Spectrum::energy() const {
  if (size() < 2) return 0.0;
  const double period = 2.0 * kPi / spacing();
  double sum = 0.0;
  for (int i = 0; i < size(); ++i)
    sum += parseval_weight(*this, i) * std::norm(amp(i));
  return period * sum;
}

double Spectrum::energy_above(double cutoff) const {
  if (size() < 2) return 0.0;
  const double period = 2.0 * kPi / spacing();
  double sum = 0.0;
  for (int i = 0; i < size(); ++i)
    if (omega(i) > cutoff) sum += parseval_weight(*this, i) * std::norm(amp(i));
  return period * sum;
}

std::vector<SpectralPeak> dominant_peaks(const Spectrum& spec, int count,
                                         double min_separation) {
  std::vector<SpectralPeak> maxima;
  const int n = spec.size();
  for (int i = 1; i < n; ++i) {
    const double m = spec.magnitude(i);
    const bool left = m > spec.magnitude(i - 1);
    const bool right = i + 1 >= n || m >= spec.magnitude(i + 1);
    if (left && right) maxima.push_back({spec.omega(i), m});
  }
  std::sort(maxima.begin(), maxima.end(),
            [](const auto& a, const auto& b) { return a.magnitude > b.magnitude; });

  std::vector<SpectralPeak> picked;
  for (const auto& p : maxima) {
    if (static_cast<int>(picked.size()) >= count) break;
    const bool clear = std::none_of(picked.begin(), picked.end(), [&](const auto& q) {
      return std::abs(q.omega - p.omega) < min_separation;
    });
    if (clear) picked.push_back(p);
  }
  return picked;
}

PwmSequence pwm_approximate(const SampledField& field,
                            const RealVector& amplitudes, double tau) {
  check_field(field);
  const int num_controls = field.controls();
  if (amplitudes.size() != num_controls)
    throw Error(ErrorCategory::kValidation,
                "expected " + std::to_string(num_controls) + " amplitudes, got " +
                    std::to_string(amplitudes.size()));
  for (int k = 0; k < num_controls; ++k)
    if (!(amplitudes(k) > 0.0) || !std::isfinite(amplitudes(k)))
      throw Error(ErrorCategory::kValidation,
                  "amplitude xi_" + std::to_string(k + 1) + " must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw Error(ErrorCategory::kGrid, "tau must be positive");

  const double ratio = tau / field.dt;
  const long per = std::lround(ratio);
  if (per < 1 || std::abs(ratio - per) > 1e-9 * ratio) {
    std::ostringstream os;
    os << "tau=" << tau << " is not an integer multiple of dt=" << field.dt;
    throw Error(ErrorCategory::kGrid, os.str());
  }
  if (field.samples() % per != 0) {
    std::ostringstream os;
    os << "field of " << field.samples() << " samples does not split into "
       << "whole subintervals of " << per << " samples";
    throw Error(ErrorCategory::kGrid, os.str());
  }

  PwmSequence seq;
  seq.tau = tau;
  seq.amplitudes = amplitudes;
  const int intervals = static_cast<int>(field.samples() / per);
  seq.widths.resize(num_controls, intervals);
  for (int k = 0; k < num_controls; ++k) {
    for (int m = 0; m < intervals; ++m) {
      const double area = field.values.row(k).segment(m * per, per).sum() * field.dt;
      double w = area / amplitudes(k);
      if (std::abs(w) > tau * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "amplitude xi_" << k + 1 << "=" << amplitudes(k)
           << " too small: subinterval " << m + 1 << " needs |w|=" << std::abs(w)
           << " > tau=" << tau;
        throw Error(ErrorCategory::kAmplitudeBound, os.str());
      }
      seq.widths(k, m) = std::clamp(w, -tau, tau);
    }
  }
  return seq;
}

RealVector default_amplitudes(const SampledField& field) {
  check_field(field);
  RealVector xi(field.controls());
  for (int k = 0; k < field.controls(); ++k) {
    const double peak = field.values.row(k).cwiseAbs().maxCoeff();
    xi(k) = peak > 0.0 ? 1.05 * peak : 1.0;
  }
  return xi;
}

int intervals_for_cutoff(double cutoff, double omega_min) {
  if (!(omega_min > 0.0) || !(cutoff > 0.0))
    throw Error(ErrorCategory::kCutoff, "cutoff and omega_min must be positive");
  const double ratio = cutoff / omega_min;
  // Tolerate ratios a rounding error above an integer.
  return static_cast<int>(std::ceil(ratio - 1e-9 * ratio)) + 1;
}

SampledField pwm_signal(const PwmSequence& seq, int control,
                        double sample_rate) {
  check_sequence(seq);
  check_control(control, seq.controls());
  const int samples = rendered_samples(seq, sample_rate);

  SampledField out;
  out.dt = seq.duration() / samples;
  out.values = RealMatrix::Zero(1, samples);
  const double xi = seq.amplitudes(control);
  const double slack = 1e-12 * seq.tau;
  for (int j = 0; j < samples; ++j) {
    const double t = out.time(j);
    const int m = std::min(static_cast<int>(t / seq.tau), seq.intervals() - 1);
    const double w = seq.widths(control, m);
    if (w != 0.0 && std::abs(t - seq.center(m)) <= 0.5 * std::abs(w) + slack)
      out.values(0, j) = xi * sgn(w);
  }
  return out;
}

SampledField inverse_pwm_pwc(const PwmSequence& seq) {
  check_sequence(seq);
  SampledField out;
  out.dt = seq.tau;
  out.values.resize(seq.controls(), seq.intervals());
  for (int k = 0; k < seq.controls(); ++k)
    out.values.row(k) = seq.widths.row(k) * (seq.amplitudes(k) / seq.tau);
  return out;
}

SampledField gaussian_train(const PwmSequence& seq, int control,
                            double sample_rate) {
  check_sequence(seq);
  check_control(control, seq.controls());
  const int samples = rendered_samples(seq, sample_rate);

  SampledField out;
  out.dt = seq.duration() / samples;
  out.values = RealMatrix::Zero(1, samples);
  const double xi = seq.amplitudes(control);
  for (int m = 0; m < seq.intervals(); ++m) {
    const double w = seq.widths(control, m);
    if (w == 0.0) continue;
    const double c = seq.center(m);
    const double reach = kGaussianSupport * std::abs(w);
    const long first = std::max<long>(0, std::lround(std::ceil((c - reach) / out.dt - 0.5)));
    const long last = std::min<long>(samples - 1, std::lround(std::floor((c + reach) / out.dt - 0.5)));
    const double peak = xi * sgn(w);
    for (long j = first; j <= last; ++j) {
      const double d = out.time(static_cast<int>(j)) - c;
      out.values(0, j) += peak * std::exp(-kPi * d * d / (w * w));
    }
  }
  return out;
}

SampledField lowpass_reconstruct(const SampledField& field, double cutoff) {
  check_field(field);
  const double nyquist = kPi / field.dt;
  if (!(cutoff >= 0.0) || cutoff >= nyquist) {
    std::ostringstream os;
    os << "cutoff " << cutoff << " must lie in [0, Nyquist=" << nyquist << ")";
    throw Error(ErrorCategory::kCutoff, os.str());
  }
  const int s = field.samples();
  const double bin_width = 2.0 * kPi / field.duration();
  const double limit = cutoff * (1.0 + 1e-12);

  SampledField out;
  out.dt = field.dt;
  out.values.resize(field.controls(), s);
  for (int k = 0; k < field.controls(); ++k) {
    Eigen::VectorXcd x = field.values.row(k).transpose().cast<Complex>();
    Eigen::VectorXcd spec = dft::forward(x);
    for (int n = 0; n < s; ++n) {
      const int signed_n = n <= s / 2 ? n : n - s;
      if (std::abs(signed_n * bin_width) > limit) spec(n) = 0.0;
    }
    const Eigen::VectorXcd back = dft::inverse(spec) / static_cast<double>(s);
    out.values.row(k) = back.real().transpose();
  }
  return out;
}

Spectrum spectrum(const SampledField& field, int control) {
  check_field(field);
  check_control(control, field.controls());
  const int s = field.samples();
  if (s < 2) throw Error(ErrorCategory::kGrid, "spectrum needs at least 2 samples");

  const Eigen::VectorXcd x = field.values.row(control).transpose().cast<Complex>();
  const Eigen::VectorXcd full = dft::forward(x);

  Spectrum out;
  out.samples = s;
  const int bins = s / 2 + 1;
  out.omega.resize(bins);
  out.amp.resize(bins);
  const double bin_width = 2.0 * kPi / field.duration();
  for (int n = 0; n < bins; ++n) {
    const double w = n * bin_width;
    out.omega(n) = w;
    // Samples sit at (j + 1/2) dt; rotate the phase to that time origin.
    const Complex shift = std::exp(-kI * (w * 0.5 * field.dt));
    const bool edge = n == 0 || (s % 2 == 0 && n == s / 2);
    out.amp(n) = full(n) * shift * ((edge ? 1.0 : 2.0) / s);
  }
  return out;
}

FunctionField::FunctionField(std::function<RealVector(double)> fn, int controls,
                             double max_panel)
    : fn_(std::move(fn)), controls_(controls), max_panel_(max_panel) {}

RealVector FunctionField::integral(double a, double b) const {
  RealVector sum = RealVector::Zero(controls_);
  if (a == b) return sum;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel_)));
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) {
      const double off = 0.5 * h * kGlNodes[i];
      sum += kGlWeights[i] * (fn_(mid - off) + fn_(mid + off));
    }
  }
  sum *= 0.5 * h;
  return a < b ? sum : RealVector(-sum);
}

HeldField::HeldField(SampledField field) : field_(std::move(field)) {
  check_field(field_);
  const int s = field_.samples();
  cumulative_.resize(field_.controls(), s + 1);
  cumulative_.col(0).setZero();
  for (int j = 0; j < s; ++j)
    cumulative_.col(j + 1) = cumulative_.col(j) + field_.dt * field_.values.col(j);
}

RealVector HeldField::value(double t) const {
  const int j = std::clamp(static_cast<int>(std::floor(t / field_.dt)), 0,
                           field_.samples() - 1);
  return field_.values.col(j);
}

RealVector HeldField::primitive(double t) const {
  const int s = field_.samples();
  if (t <= 0.0) return field_.values.col(0) * t;
  const double end = field_.duration();
  if (t >= end) return cumulative_.col(s) + field_.values.col(s - 1) * (t - end);
  const int j = std::min(static_cast<int>(t / field_.dt), s - 1);
  return cumulative_.col(j) + field_.values.col(j) * (t - j * field_.dt);
}

RealVector HeldField::integral(double a, double b) const {
  return primitive(b) - primitive(a);
}

}  // namespace pwmq

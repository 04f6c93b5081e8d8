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

#include "pwmq/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pwmq {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

std::vector<SignedControl> prefix(const PulseFrame& frame, size_t length) {
  std::vector<SignedControl> active;
  active.reserve(length);
  for (size_t i = 0; i < length; ++i)
    active.push_back({frame.order[i], frame.signs[frame.order[i]]});
  return active;
}

RealVector default_ones(const ControlSystem& sys, const RealVector* amplitudes) {
  if (amplitudes) return *amplitudes;
  return RealVector::Ones(sys.num_controls());
}

int whole_intervals(double total_time, double tau) {
  if (!(tau > 0.0) || !(total_time > 0.0))
    throw Error(ErrorCategory::kGrid, "tau and T must be positive");
  const double ratio = total_time / tau;
  const long m = std::lround(ratio);
  if (m < 1 || std::abs(ratio - m) > 1e-9 * ratio) {
    std::ostringstream os;
    os << "T=" << total_time << " is not an integer multiple of tau=" << tau;
    throw Error(ErrorCategory::kGrid, os.str());
  }
  return static_cast<int>(m);
}

// Widths for one window of a continuous field, checked against the window
// length.
std::vector<double> window_widths(const ControlField& field,
                                  const RealVector& amplitudes, double lo,
                                  double hi) {
  const RealVector area = field.integral(lo, hi);
  const double len = hi - lo;
  std::vector<double> w(area.size());
  for (Eigen::Index k = 0; k < area.size(); ++k) {
    w[k] = area(k) / amplitudes(k);
    if (std::abs(w[k]) > len * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "amplitude xi_" << k + 1 << "=" << amplitudes(k)
         << " too small for window [" << lo << ", " << hi << "]";
      throw Error(ErrorCategory::kAmplitudeBound, os.str());
    }
    w[k] = std::clamp(w[k], -len, len);
  }
  return w;
}

}  // namespace

Matrix expm_hermitian(const Matrix& h, double theta) {
  if (h.rows() != h.cols())
    throw Error(ErrorCategory::kValidation, "exponent is not square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double residual = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10 * scale)) {
    std::ostringstream os;
    os << "exponent is not Hermitian (residual " << residual << ")";
    throw Error(ErrorCategory::kValidation, os.str());
  }
  return diagonalize(h).exponential(theta);
}

double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

double PulseFrame::total() const {
  if (dwell.empty()) return 0.0;
  const double sides = std::accumulate(dwell.begin(), dwell.end() - 1, 0.0);
  return 2.0 * sides + dwell.back();
}

double PulseFrame::active_time(int control) const {
  const auto it = std::find(order.begin(), order.end(), control);
  if (it == order.end()) return 0.0;
  const size_t pos = static_cast<size_t>(it - order.begin());
  double sides = 0.0;
  for (size_t j = pos + 1; j + 1 < dwell.size(); ++j) sides += dwell[j];
  return 2.0 * sides + dwell.back();
}

bool PulseFrame::has_tie(double tol) const {
  // Consecutive listed controls tie when the dwell between them vanishes.
  for (size_t j = 1; j + 1 < dwell.size(); ++j)
    if (2.0 * dwell[j] < tol) return true;
  return false;
}

PulseFrame build_frame(std::span<const double> widths, double tau,
                       bool keep_zero_widths) {
  if (!(tau > 0.0)) throw Error(ErrorCategory::kGrid, "tau must be positive");
  const int num = static_cast<int>(widths.size());
  PulseFrame frame;
  frame.tau = tau;
  frame.signs.assign(num, 0);
  for (int k = 0; k < num; ++k) {
    const double w = widths[k];
    if (!std::isfinite(w) || std::abs(w) > tau * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "width w_" << k + 1 << "=" << w << " exceeds tau=" << tau;
      throw Error(ErrorCategory::kRange, os.str());
    }
    if (w != 0.0) {
      frame.signs[k] = static_cast<int>(sgn(w));
      frame.order.push_back(k);
    } else if (keep_zero_widths) {
      frame.signs[k] = 1;
      frame.order.push_back(k);
    }
  }
  std::stable_sort(frame.order.begin(), frame.order.end(), [&](int a, int b) {
    return std::abs(widths[a]) > std::abs(widths[b]);
  });

  const size_t active = frame.order.size();
  frame.dwell.assign(active + 1, 0.0);
  if (active == 0) {
    frame.dwell[0] = tau;
    return frame;
  }
  auto mag = [&](size_t j) { return std::min(std::abs(widths[frame.order[j]]), tau); };
  frame.dwell[0] = 0.5 * (tau - mag(0));
  for (size_t j = 1; j < active; ++j) frame.dwell[j] = 0.5 * (mag(j - 1) - mag(j));
  frame.dwell[active] = mag(active - 1);
  for (auto& d : frame.dwell) d = std::max(d, 0.0);
  return frame;
}

PulseFrame build_frame(const PwmSequence& seq, int interval) {
  if (interval < 0 || interval >= seq.intervals())
    throw Error(ErrorCategory::kRange,
                "subinterval " + std::to_string(interval + 1) + " outside 1.." +
                    std::to_string(seq.intervals()));
  const RealVector col = seq.widths.col(interval);
  return build_frame(std::span<const double>(col.data(), col.size()), seq.tau);
}

PwmPropagator::PwmPropagator(ControlSystem sys, RealVector amplitudes,
                             bool use_cache)
    : cache_(std::move(sys), std::move(amplitudes)), use_cache_(use_cache) {
  require_valid(cache_.system());
  for (Eigen::Index k = 0; k < cache_.amplitudes().size(); ++k)
    if (!(cache_.amplitudes()(k) > 0.0))
      throw Error(ErrorCategory::kValidation, "pulse amplitudes must be positive");
}

std::vector<PwmFactor> PwmPropagator::factors(const PulseFrame& frame,
                                              double time_sign) const {
  const size_t active = frame.order.size();
  if (frame.dwell.size() != active + 1 ||
      frame.signs.size() != static_cast<size_t>(system().num_controls()))
    throw Error(ErrorCategory::kValidation, "malformed pulse frame");

  std::vector<std::shared_ptr<const EigEntry>> levels(active + 1);
  for (size_t j = 0; j <= active; ++j) {
    const auto active_set = prefix(frame, j);
    if (use_cache_) {
      levels[j] = cache_.get(active_set);
    } else {
      levels[j] = std::make_shared<const EigEntry>(
          diagonalize(cache_.hamiltonian(active_set)));
    }
  }

  std::vector<PwmFactor> out;
  out.reserve(2 * active + 1);
  for (size_t j = 0; j < active; ++j)
    out.push_back({levels[j], time_sign * frame.dwell[j]});
  out.push_back({levels[active], time_sign * frame.dwell[active]});
  for (size_t j = active; j-- > 0;)
    out.push_back({levels[j], time_sign * frame.dwell[j]});
  return out;
}

Matrix PwmPropagator::step(const PulseFrame& frame, double time_sign) const {
  const int n = system().dim();
  Matrix u = Matrix::Identity(n, n);
  for (const auto& f : factors(frame, time_sign)) {
    if (f.duration == 0.0) continue;
    u = f.entry->exponential(f.duration) * u;
  }
  return u;
}

Matrix step_pwm(const ControlSystem& sys, const RealVector& amplitudes,
                const PulseFrame& frame) {
  return PwmPropagator(sys, amplitudes).step(frame);
}

Matrix step_pwc(const ControlSystem& sys, const RealVector& u, double tau) {
  return expm_hermitian(sys.hamiltonian(u), tau);
}

Matrix step_spo(const ControlSystem& sys, const RealVector& u, double tau) {
  const int num = sys.num_controls();
  std::vector<Matrix> half(num + 1);
  half[0] = expm_hermitian(sys.drift, 0.5 * tau);
  for (int k = 0; k < num; ++k)
    half[k + 1] = expm_hermitian(sys.controls[k], 0.5 * tau * u(k));
  Matrix out = Matrix::Identity(sys.dim(), sys.dim());
  for (int k = 0; k <= num; ++k) out = out * half[k];
  for (int k = num; k >= 0; --k) out = out * half[k];
  return out;
}

double suzuki_coefficient(int n) {
  if (n < 2)
    throw Error(ErrorCategory::kRange,
                "concatenation level n=" + std::to_string(n) + " must be >= 2");
  // Real odd root: (-2)^{1/(2n-1)} = -2^{1/(2n-1)}.
  const double root = -std::pow(2.0, 1.0 / (2 * n - 1));
  return 1.0 / (2.0 + root);
}

Matrix step_pwm_higher(const PwmPropagator& prop, const PwmSequence& seq,
                       int interval, int n) {
  suzuki_coefficient(n);
  if (interval < 0 || interval >= seq.intervals())
    throw Error(ErrorCategory::kRange, "subinterval out of range");
  const RealVector col = seq.widths.col(interval);
  const double tau = seq.tau;

  auto rec = [&](auto&& self, int level, double span) -> Matrix {
    if (level == 1) {
      const double len = std::abs(span);
      std::vector<double> w(col.size());
      for (Eigen::Index k = 0; k < col.size(); ++k) w[k] = col(k) * (len / tau);
      return prop.step(build_frame(w, len), sgn(span));
    }
    const double s = suzuki_coefficient(level);
    const Matrix outer = self(self, level - 1, s * span);
    const Matrix inner = self(self, level - 1, (1.0 - 2.0 * s) * span);
    return outer * inner * outer;
  };
  return rec(rec, n, tau);
}

Matrix step_pwm_higher(const PwmPropagator& prop, const ControlField& field,
                       double t_start, double tau, int n) {
  suzuki_coefficient(n);
  const RealVector& xi = prop.amplitudes();

  auto rec = [&](auto&& self, int level, double start, double span) -> Matrix {
    if (level == 1) {
      const double lo = std::min(start, start + span);
      const double hi = std::max(start, start + span);
      const auto w = window_widths(field, xi, lo, hi);
      return prop.step(build_frame(w, hi - lo), sgn(span));
    }
    const double s = suzuki_coefficient(level);
    const Matrix first = self(self, level - 1, start, s * span);
    const Matrix middle = self(self, level - 1, start + s * span, (1.0 - 2.0 * s) * span);
    const Matrix last = self(self, level - 1, start + (1.0 - s) * span, s * span);
    return last * middle * first;
  };
  return rec(rec, n, t_start, tau);
}

Matrix reference_propagator(const ControlSystem& sys, const ControlField& field,
                            double t0, double t1, int resolution) {
  if (resolution < 100)
    throw Error(ErrorCategory::kRange, "reference resolution must be >= 100");
  require_valid(sys);
  const double h = (t1 - t0) / resolution;
  Matrix u = Matrix::Identity(sys.dim(), sys.dim());
  for (int j = 0; j < resolution; ++j) {
    const double t = t0 + (j + 0.5) * h;
    u = diagonalize(sys.hamiltonian(field.value(t))).exponential(h) * u;
  }
  return u;
}

Scheme Scheme::parse(const std::string& name, int order) {
  if (name == "pwc") return pwc();
  if (name == "spo") return spo();
  if (name == "pwm") return pwm();
  if (name == "pwm2n") {
    if (order < 2) throw Error(ErrorCategory::kScheme, "pwm2n needs an order n >= 2");
    return pwm_higher(order);
  }
  if (name.size() > 3 && name.starts_with("pwm")) {
    int two_n = 0;
    try {
      two_n = std::stoi(name.substr(3));
    } catch (const std::exception&) {
      two_n = 0;
    }
    if (two_n == 2) return pwm();
    if (two_n >= 4 && two_n % 2 == 0) return pwm_higher(two_n / 2);
  }
  throw Error(ErrorCategory::kScheme, "unknown scheme '" + name + "'");
}

std::string Scheme::name() const {
  switch (kind) {
    case SchemeKind::kPwc: return "pwc";
    case SchemeKind::kSpo: return "spo";
    case SchemeKind::kPwm: return "pwm";
    case SchemeKind::kPwmHigher: return "pwm" + std::to_string(2 * order);
  }
  return "unknown";
}

Matrix evolve(const ControlSystem& sys, const Scheme& scheme,
              const PwmSequence& seq, const EvolveOptions& options) {
  if (scheme.kind == SchemeKind::kPwc || scheme.kind == SchemeKind::kSpo)
    throw Error(ErrorCategory::kScheme,
                scheme.name() + " propagates a continuous field, not a pulse sequence");
  if (seq.controls() != sys.num_controls())
    throw Error(ErrorCategory::kValidation, "sequence and system control counts differ");
  const PwmPropagator prop(sys, seq.amplitudes, options.use_cache);
  Matrix u = Matrix::Identity(sys.dim(), sys.dim());
  for (int m = 0; m < seq.intervals(); ++m) {
    if (scheme.kind == SchemeKind::kPwm || scheme.order < 2)
      u = prop.step(build_frame(seq, m)) * u;
    else
      u = step_pwm_higher(prop, seq, m, scheme.order) * u;
  }
  return u;
}

Matrix evolve(const ControlSystem& sys, const Scheme& scheme,
              const ControlField& field, double total_time, double tau,
              const RealVector* amplitudes, const EvolveOptions& options) {
  require_valid(sys);
  if (field.controls() != sys.num_controls())
    throw Error(ErrorCategory::kValidation, "field and system control counts differ");
  const int intervals = whole_intervals(total_time, tau);
  Matrix u = Matrix::Identity(sys.dim(), sys.dim());

  if (scheme.kind == SchemeKind::kPwc || scheme.kind == SchemeKind::kSpo) {
    for (int m = 0; m < intervals; ++m) {
      const RealVector mid = field.value((m + 0.5) * tau);
      u = (scheme.kind == SchemeKind::kPwc ? step_pwc(sys, mid, tau)
                                           : step_spo(sys, mid, tau)) * u;
    }
    return u;
  }

  if (!amplitudes)
    throw Error(ErrorCategory::kScheme,
                scheme.name() + " on a continuous field needs pulse amplitudes");
  const PwmPropagator prop(sys, *amplitudes, options.use_cache);
  for (int m = 0; m < intervals; ++m) {
    const double start = m * tau;
    if (scheme.kind == SchemeKind::kPwm || scheme.order < 2) {
      const auto w = window_widths(field, *amplitudes, start, start + tau);
      u = prop.step(build_frame(w, tau)) * u;
    } else {
      u = step_pwm_higher(prop, field, start, tau, scheme.order) * u;
    }
  }
  return u;
}

Matrix scheme_step(const ControlSystem& sys, const Scheme& scheme,
                   const ControlField& field, double t_start, double tau,
                   const RealVector* amplitudes) {
  const RealVector mid = field.value(t_start + 0.5 * tau);
  switch (scheme.kind) {
    case SchemeKind::kPwc: return step_pwc(sys, mid, tau);
    case SchemeKind::kSpo: return step_spo(sys, mid, tau);
    case SchemeKind::kPwm:
    case SchemeKind::kPwmHigher: {
      const RealVector xi = default_ones(sys, amplitudes);
      const PwmPropagator prop(sys, xi);
      if (scheme.kind == SchemeKind::kPwmHigher && scheme.order >= 2)
        return step_pwm_higher(prop, field, t_start, tau, scheme.order);
      const auto w = window_widths(field, xi, t_start, t_start + tau);
      return prop.step(build_frame(w, tau));
    }
  }
  throw Error(ErrorCategory::kScheme, "unknown scheme");
}

namespace {

void check_tau_list(std::span<const double> taus) {
  if (taus.size() < 4)
    throw Error(ErrorCategory::kGrid, "error-order fit needs at least 4 tau values");
  for (double t : taus)
    if (!(t > 0.0)) throw Error(ErrorCategory::kGrid, "tau values must be positive");
  const double ratio = taus[1] / taus[0];
  for (size_t i = 2; i < taus.size(); ++i)
    if (std::abs(taus[i] / taus[i - 1] - ratio) > 1e-6 * std::abs(ratio))
      throw Error(ErrorCategory::kGrid, "tau values must be geometrically spaced");
}

void fit_slope(ErrorOrderFit& fit) {
  fit.saturated = std::all_of(fit.errors.begin(), fit.errors.end(),
                              [](double e) { return e < 1e-13; });
  if (fit.saturated) return;
  const size_t n = fit.taus.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(fit.taus[i]);
    const double y = std::log(std::max(fit.errors[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
}

}  // namespace

ErrorOrderFit error_order(const ControlSystem& sys, const Scheme& scheme,
                          const ControlField& field, std::span<const double> taus,
                          const ErrorOrderOptions& options) {
  check_tau_list(taus);
  const RealVector xi = options.amplitudes.size()
                            ? options.amplitudes
                            : RealVector(RealVector::Ones(sys.num_controls()));
  ErrorOrderFit fit;
  for (double tau : taus) {
    const double t0 = options.t_start;
    const Matrix approx = scheme_step(sys, scheme, field, t0, tau, &xi);
    const Matrix exact = reference_propagator(sys, field, t0, t0 + tau, options.resolution);
    fit.taus.push_back(tau);
    fit.errors.push_back((approx - exact).norm());
  }
  fit_slope(fit);
  return fit;
}

ErrorOrderFit global_error_order(const ControlSystem& sys, const Scheme& scheme,
                                 const ControlField& field,
                                 std::span<const double> taus,
                                 const ErrorOrderOptions& options) {
  check_tau_list(taus);
  const RealVector xi = options.amplitudes.size()
                            ? options.amplitudes
                            : RealVector(RealVector::Ones(sys.num_controls()));
  const Matrix exact = reference_propagator(sys, field, 0.0, options.total_time,
                                            options.global_resolution);
  ErrorOrderFit fit;
  for (double tau : taus) {
    const Matrix approx = evolve(sys, scheme, field, options.total_time, tau, &xi);
    fit.taus.push_back(tau);
    fit.errors.push_back((approx - exact).norm());
  }
  fit_slope(fit);
  return fit;
}

}  // namespace pwmq

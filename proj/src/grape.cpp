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

#include "pwmq/grape.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace pwmq {

int GrapeProblem::intervals() const {
  require_valid(system);
  if (initial.dim() != system.dim() || target.dim() != system.dim())
    throw Error(ErrorCategory::kValidation, "state and system dimensions differ");
  if (amplitudes.size() != system.num_controls())
    throw Error(ErrorCategory::kValidation, "one pulse amplitude per control required");
  for (Eigen::Index k = 0; k < amplitudes.size(); ++k)
    if (!(amplitudes(k) > 0.0))
      throw Error(ErrorCategory::kValidation, "pulse amplitudes must be positive");
  if (!(tau > 0.0) || !(total_time > 0.0))
    throw Error(ErrorCategory::kGrid, "T and tau must be positive");
  const double ratio = total_time / tau;
  const long m = std::lround(ratio);
  if (m < 1 || std::abs(ratio - m) > 1e-9 * ratio) {
    std::ostringstream os;
    os << "T/tau = " << ratio << " is not an integer";
    throw Error(ErrorCategory::kGrid, os.str());
  }
  return static_cast<int>(m);
}

GrapeProblem ten_level_problem() {
  auto sys = build_ten_level_system();
  return GrapeProblem{sys,
                      StateVector::basis(10, 0),
                      StateVector::basis(10, 3),
                      100.0,
                      0.1,
                      RealVector::Ones(1)};
}

double infidelity(const Matrix& u, const StateVector& initial,
                  const StateVector& target) {
  if (u.rows() != u.cols() || u.rows() != initial.dim() || u.rows() != target.dim())
    throw Error(ErrorCategory::kValidation, "propagator and state dimensions differ");
  const Complex overlap = target.amplitudes().dot(u * initial.amplitudes());
  return 1.0 - std::norm(overlap);
}

namespace {

void check_widths(const RealMatrix& widths, int controls, int intervals, double tau) {
  if (widths.rows() != controls || widths.cols() != intervals) {
    std::ostringstream os;
    os << "width array is " << widths.rows() << "x" << widths.cols() << ", expected "
       << controls << "x" << intervals;
    throw Error(ErrorCategory::kValidation, os.str());
  }
  for (Eigen::Index m = 0; m < widths.cols(); ++m)
    for (Eigen::Index k = 0; k < widths.rows(); ++k)
      if (!std::isfinite(widths(k, m)) || std::abs(widths(k, m)) > tau * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "width w_" << k + 1 << "^(" << m + 1 << ")=" << widths(k, m)
           << " outside [-tau, tau]";
        throw Error(ErrorCategory::kRange, os.str());
      }
}

void check_finite(double j) {
  if (!std::isfinite(j))
    throw Error(ErrorCategory::kNumerical, "infidelity became non-finite");
}

Vector apply_factor(const PwmFactor& f, const Vector& v) {
  return f.duration == 0.0 ? v : f.entry->apply(f.duration, v);
}

}  // namespace

PwmObjective::PwmObjective(GrapeProblem problem, bool use_cache)
    : problem_(std::move(problem)),
      intervals_(problem_.intervals()),
      prop_(problem_.system, problem_.amplitudes, use_cache) {}

std::vector<PulseFrame> PwmObjective::frames(const RealMatrix& widths,
                                             bool* tie) const {
  check_widths(widths, controls(), intervals_, problem_.tau);
  std::vector<PulseFrame> out;
  out.reserve(intervals_);
  for (int m = 0; m < intervals_; ++m) {
    const RealVector col = widths.col(m);
    out.push_back(build_frame(std::span<const double>(col.data(), col.size()),
                              problem_.tau, /*keep_zero_widths=*/true));
    if (tie && out.back().has_tie()) *tie = true;
  }
  return out;
}

Matrix PwmObjective::propagator(const RealMatrix& widths) const {
  const int n = problem_.system.dim();
  Matrix u = Matrix::Identity(n, n);
  for (const auto& frame : frames(widths, nullptr)) u = prop_.step(frame) * u;
  return u;
}

double PwmObjective::value(const RealMatrix& widths) {
  Vector psi = problem_.initial.amplitudes();
  for (const auto& frame : frames(widths, nullptr))
    for (const auto& f : prop_.factors(frame)) psi = apply_factor(f, psi);
  const double j = 1.0 - std::norm(problem_.target.amplitudes().dot(psi));
  check_finite(j);
  return j;
}

GradientResult PwmObjective::evaluate(const RealMatrix& widths) {
  GradientResult out;
  const auto frame_list = frames(widths, &out.tie_warning);
  const int num_controls = controls();

  // Forward sweep, keeping the state entering every subinterval.
  std::vector<std::vector<PwmFactor>> factor_lists(intervals_);
  std::vector<Vector> entering(intervals_);
  Vector psi = problem_.initial.amplitudes();
  for (int m = 0; m < intervals_; ++m) {
    entering[m] = psi;
    factor_lists[m] = prop_.factors(frame_list[m]);
    for (const auto& f : factor_lists[m]) psi = apply_factor(f, psi);
  }
  const Complex overlap = problem_.target.amplitudes().dot(psi);
  out.infidelity = 1.0 - std::norm(overlap);
  check_finite(out.infidelity);
  out.gradient = RealMatrix::Zero(num_controls, intervals_);

  // Backward sweep: chi is the costate leaving subinterval m.
  Vector chi = problem_.target.amplitudes();
  for (int m = intervals_ - 1; m >= 0; --m) {
    const auto& factors = factor_lists[m];
    const PulseFrame& frame = frame_list[m];
    const size_t active = frame.order.size();
    const size_t count = factors.size();

    std::vector<Vector> states(count + 1);
    states[0] = entering[m];
    for (size_t i = 0; i < count; ++i) states[i + 1] = apply_factor(factors[i], states[i]);

    // d<chi|U|psi>/d dwell[level], summed over both palindromic occurrences.
    std::vector<Complex> by_level(active + 1, Complex(0.0));
    Vector costate = chi;
    for (size_t i = count; i-- > 0;) {
      const size_t level = i <= active ? i : 2 * active - i;
      const Vector h_state = factors[i].entry->hamiltonian * states[i + 1];
      by_level[level] += -kI * costate.dot(h_state);
      costate = apply_factor({factors[i].entry, -factors[i].duration}, costate);
    }
    chi = costate;

    // dwell[p] = (|w_p| - |w_{p+1}|)/2 style dependence on the sorted widths.
    for (size_t p = 0; p < active; ++p) {
      const int k = frame.order[p];
      const double upper = p + 1 < active ? 0.5 : 1.0;
      const Complex d_abs = -0.5 * by_level[p] + upper * by_level[p + 1];
      const Complex d_signed = static_cast<double>(frame.signs[k]) * d_abs;
      out.gradient(k, m) = -2.0 * std::real(std::conj(overlap) * d_signed);
    }
  }
  return out;
}

PwcObjective::PwcObjective(GrapeProblem problem)
    : problem_(std::move(problem)), intervals_(problem_.intervals()) {}

double PwcObjective::value(const RealMatrix& widths) {
  check_widths(widths, controls(), intervals_, problem_.tau);
  const double tau = problem_.tau;
  Vector psi = problem_.initial.amplitudes();
  for (int m = 0; m < intervals_; ++m) {
    const RealVector u = widths.col(m).cwiseProduct(problem_.amplitudes) / tau;
    psi = diagonalize(problem_.system.hamiltonian(u)).apply(tau, psi);
  }
  const double j = 1.0 - std::norm(problem_.target.amplitudes().dot(psi));
  check_finite(j);
  return j;
}

GradientResult PwcObjective::evaluate(const RealMatrix& widths) {
  check_widths(widths, controls(), intervals_, problem_.tau);
  const double tau = problem_.tau;
  const int num_controls = controls();

  std::vector<EigEntry> steps;
  steps.reserve(intervals_);
  std::vector<Vector> after(intervals_);
  Vector psi = problem_.initial.amplitudes();
  for (int m = 0; m < intervals_; ++m) {
    const RealVector u = widths.col(m).cwiseProduct(problem_.amplitudes) / tau;
    steps.push_back(diagonalize(problem_.system.hamiltonian(u)));
    psi = steps.back().apply(tau, psi);
    after[m] = psi;
  }

  GradientResult out;
  const Complex overlap = problem_.target.amplitudes().dot(psi);
  out.infidelity = 1.0 - std::norm(overlap);
  check_finite(out.infidelity);
  out.gradient = RealMatrix::Zero(num_controls, intervals_);

  Vector chi = problem_.target.amplitudes();
  for (int m = intervals_ - 1; m >= 0; --m) {
    for (int k = 0; k < num_controls; ++k) {
      const Complex d_overlap =
          -kI * tau * chi.dot(problem_.system.controls[k] * after[m]);
      const double d_u = -2.0 * std::real(std::conj(overlap) * d_overlap);
      out.gradient(k, m) = d_u * problem_.amplitudes(k) / tau;
    }
    chi = steps[m].apply(-tau, chi);
  }
  return out;
}

GradientResult gradient(const GrapeProblem& problem, const RealMatrix& widths) {
  PwmObjective objective(problem);
  return objective.evaluate(widths);
}

RealMatrix random_initial_widths(const GrapeProblem& problem, std::uint64_t seed,
                                 double half_range) {
  const int intervals = problem.intervals();
  const int controls = problem.system.num_controls();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> field(-half_range, half_range);
  RealMatrix w(controls, intervals);
  for (int m = 0; m < intervals; ++m)
    for (int k = 0; k < controls; ++k) {
      const double area = field(rng) * problem.tau;
      w(k, m) = std::clamp(area / problem.amplitudes(k), -problem.tau, problem.tau);
    }
  return w;
}

GrapeResult optimize(GrapeObjective& objective, const RealMatrix& initial_widths,
                     const GrapeOptions& options) {
  if (!(options.initial_step > 0.0))
    throw Error(ErrorCategory::kValidation, "initial_step must be positive");
  if (!(options.tolerance > 0.0 && options.tolerance < 1.0))
    throw Error(ErrorCategory::kValidation, "tolerance must lie in (0, 1)");
  if (options.max_iterations < 0)
    throw Error(ErrorCategory::kValidation, "max_iterations must be non-negative");
  const double bound = options.width_bound > 0.0 ? options.width_bound : objective.tau();
  auto project = [bound](const RealMatrix& w) -> RealMatrix {
    return w.cwiseMax(-bound).cwiseMin(bound);
  };

  const auto start = std::chrono::steady_clock::now();
  GrapeResult result;
  result.widths = project(initial_widths);
  GradientResult current = objective.evaluate(result.widths);
  check_finite(current.infidelity);
  result.trace.push_back(current.infidelity);
  double step = options.initial_step;

  while (true) {
    if (current.infidelity <= options.tolerance) {
      result.converged = true;
      result.stop_reason = "tolerance reached";
      break;
    }
    if (result.iterations >= options.max_iterations) {
      result.stop_reason = "iteration limit";
      break;
    }
    bool accepted = false;
    RealMatrix trial;
    for (int b = 0; b <= options.max_backtracks; ++b) {
      trial = project(result.widths - step * current.gradient);
      const double j = objective.value(trial);
      check_finite(j);
      if (j < current.infidelity) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.stop_reason = "line search stalled";
      break;
    }
    result.widths = std::move(trial);
    current = objective.evaluate(result.widths);
    check_finite(current.infidelity);
    result.trace.push_back(current.infidelity);
    ++result.iterations;
    step *= options.step_growth;
  }
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

GrapeResult optimize(const GrapeProblem& problem, const RealMatrix& initial_widths,
                     const GrapeOptions& options) {
  PwmObjective objective(problem);
  return optimize(objective, initial_widths, options);
}

GrapeResult optimize(const GrapeProblem& problem, const GrapeOptions& options) {
  return optimize(problem, random_initial_widths(problem, options.rng_seed), options);
}

}  // namespace pwmq

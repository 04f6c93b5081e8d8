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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runtime budgets are part of the criteria where stated.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pwmq/costmodel.hpp"
#include "pwmq/grape.hpp"
#include "pwmq/propagate.hpp"
#include "pwmq/pwm.hpp"

namespace {

using namespace pwmq;

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // <= 0: no runtime gate
  std::function<Verdict()> check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// sin t over one period, M = 20, xi = 1. The sample count is the first
// multiple of M at or above 2^14 so every subinterval holds whole samples.
constexpr int kPeriodSamples = 20 * 820;

PwmSequence sine_sequence(SampledField* field_out = nullptr) {
  const int m = 20;
  const double tau = 2 * kPi / m;
  const SampledField field = SampledField::from_function(
      [](double t) -> RealVector { return RealVector::Constant(1, std::sin(t)); }, 1,
      2 * kPi / kPeriodSamples, kPeriodSamples);
  if (field_out) *field_out = field;
  return pwm_approximate(field, RealVector::Ones(1), tau);
}

double harmonic(const Spectrum& s, int h) { return s.magnitude(s.bin(h)); }

// Shared spectral thresholds of criteria 1 and 2.
Verdict spectral_thresholds(const Spectrum& input, const Spectrum& output,
                            const std::string& extra) {
  const double h1_ratio = harmonic(output, 1) / harmonic(input, 1);
  double worst = 0.0;
  int worst_h = 2;
  for (int h = 2; h <= 18; ++h) {
    const double r = harmonic(output, h) / harmonic(output, 1);
    if (r > worst) {
      worst = r;
      worst_h = h;
    }
  }
  const bool pass = std::abs(h1_ratio - 1.0) <= 0.02 && worst <= 0.02;
  return {pass, fmt("h1/h1_in=%.5f (need within 0.02 of 1), max h2..18 = h%d at %.4f of h1 "
                    "(need <= 0.02)",
                    h1_ratio, worst_h, worst) +
                    extra};
}

Verdict spectral_match() {
  SampledField field;
  const PwmSequence seq = sine_sequence(&field);
  const SampledField sig = pwm_signal(seq, 0, kPeriodSamples / seq.duration());
  const Spectrum in = spectrum(field, 0);
  const Spectrum out = spectrum(sig, 0);
  // The closed-form Fourier series of the rectangular train is the oracle.
  const double oracle_h1 = oracle::rect_train_harmonic(seq, 0, 1);
  double oracle_worst = 0.0;
  for (int h = 2; h <= 18; ++h)
    oracle_worst = std::max(oracle_worst, oracle::rect_train_harmonic(seq, 0, h) / oracle_h1);
  return spectral_thresholds(
      in, out, fmt("; closed-form train: h1=%.5f, max h2..18 %.4f of h1", oracle_h1, oracle_worst));
}

Verdict gaussian_match() {
  SampledField field;
  const PwmSequence seq = sine_sequence(&field);
  const SampledField g = gaussian_train(seq, 0, kPeriodSamples / seq.duration());
  Verdict v = spectral_thresholds(spectrum(field, 0), spectrum(g, 0), "");

  // Each pulse rendered alone at a fine rate; the rectangle rule is
  // spectrally accurate for a Gaussian far from the record edges.
  double worst = 0.0;
  for (int m = 0; m < seq.intervals(); ++m) {
    PwmSequence one = seq;
    one.widths.setZero();
    one.widths(0, m) = seq.widths(0, m);
    const SampledField p = gaussian_train(one, 0, 2e4 / one.tau);
    const double area = std::abs(p.values.sum() * p.dt);
    worst = std::max(worst, std::abs(area - seq.amplitudes(0) * std::abs(seq.widths(0, m))));
  }
  v.pass = v.pass && worst <= 1e-9;
  v.detail += fmt("; max |pulse area - xi|w|| = %.2e (need <= 1e-9)", worst);
  return v;
}

const FunctionField& sine_field() {
  static const FunctionField f(
      [](double t) -> RealVector { return RealVector::Constant(1, std::sin(t)); }, 1);
  return f;
}

Verdict local_orders() {
  const ControlSystem sys = build_two_level_system();
  const std::vector<double> taus{0.2, 0.1, 0.05, 0.025};
  bool pass = true;
  std::string detail;
  for (const Scheme& s : {Scheme::pwc(), Scheme::spo(), Scheme::pwm()}) {
    const double slope = error_order(sys, s, sine_field(), taus).slope;
    pass = pass && std::abs(slope - 3.0) <= 0.2;
    detail += fmt("%s %.3f, ", s.name().c_str(), slope);
  }
  const double s4 = error_order(sys, Scheme::pwm_higher(2), sine_field(), taus).slope;
  pass = pass && std::abs(s4 - 5.0) <= 0.3;
  detail += fmt("S4 %.3f (need 3.0+-0.2, S4 5.0+-0.3)", s4);
  return {pass, detail};
}

Verdict global_order() {
  const ControlSystem sys = build_two_level_system();
  const std::vector<double> taus{0.2, 0.1, 0.05, 0.025};
  const double slope = global_error_order(sys, Scheme::pwm(), sine_field(), taus).slope;
  return {std::abs(slope - 2.0) <= 0.2, fmt("pwm global slope %.3f over T=10 (need 2.0+-0.2)", slope)};
}

Verdict dwell_identities() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> tau_dist(0.01, 2.0);
  double worst_sum = 0.0, worst_active = 0.0;
  int vectors = 0;
  for (int k : {1, 2, 3, 5})
    for (int trial = 0; trial < 1000; ++trial, ++vectors) {
      const double tau = tau_dist(rng);
      std::vector<double> w(k);
      for (auto& x : w) x = u(rng) * tau;
      const PulseFrame f = build_frame(w, tau);
      double sum = 0.0;
      for (size_t j = 0; j + 1 < f.dwell.size(); ++j) sum += 2 * f.dwell[j];
      sum += f.dwell.back();
      worst_sum = std::max(worst_sum, std::abs(sum - tau));
      for (int c = 0; c < k; ++c)
        worst_active = std::max(worst_active, std::abs(f.active_time(c) - std::abs(w[c])));
    }
  return {worst_sum <= 1e-12 && worst_active <= 1e-12,
          fmt("%d vectors, max |dwell sum - tau| %.1e, max |active - |w|| %.1e (need <= 1e-12)",
              vectors, worst_sum, worst_active)};
}

Verdict gradient_check() {
  const GrapeProblem p = ten_level_problem();
  std::mt19937_64 rng(6);
  int bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const RealMatrix w = random_initial_widths(p, rng());
    const GradientResult g = gradient(p, w);
    const RealMatrix fd = oracle::fd_gradient(p, w);
    double wr = 0.0;
    bad += oracle::count_mismatches(g.gradient, fd, 1e-6, 1e-10, &wr);
    worst = std::max(worst, wr);
  }
  return {bad == 0, fmt("20 vectors x 1000 widths, %d entries outside tolerance, worst relative "
                        "error %.2e (need <= 1e-6, floor 1e-10)",
                        bad, worst)};
}

// Criteria 7 to 9 share one benchmark run.
const BenchmarkReport& benchmark() {
  static const BenchmarkReport report = [] {
    BenchmarkOptions o;
    o.repeats = 25;
    o.seed = 1;
    o.jobs = 1;
    return run_fig5_benchmark(ten_level_problem(), o);
  }();
  return report;
}

Verdict convergence() {
  const BenchmarkReport& r = benchmark();
  return {r.converged_pwm >= 20,
          fmt("PWM converged %d/25 to J <= 1e-3 (need >= 20); PWC converged %d/25",
              r.converged_pwm, r.converged_pwc)};
}

Verdict speedup() {
  const BenchmarkReport& r = benchmark();
  const double ratio = r.speed_ratio();
  return {ratio > 0.0 && ratio < 1.0,
          fmt("median PWM %.3f s, median PWC %.3f s, ratio %.3f (gate < 1.0; below 0.5: %s)",
              r.median_pwm_seconds, r.median_pwc_seconds, ratio, ratio < 0.5 ? "yes" : "no")};
}

Verdict physics() {
  const BenchmarkReport& r = benchmark();
  return {r.physics_matches >= 15,
          fmt("%d of %d converged runs have peaks at 4 and 3 within 0.5 (need >= 15)",
              r.physics_matches, r.converged_pwm)};
}

Verdict cost_model() {
  const CostParams c{10, 1, 8};
  const GammaGrid grid = gamma_grid(2, 200, 2, 30, 1);
  const double g = gamma_ratio(c);
  const bool pass = cost_pwc(c) == 7100 && cost_pwm(c) == 1170 && cost_spo(c) == 1170 &&
                    std::abs(g - 0.1648) <= 1e-4 && grid.has_below_one() &&
                    grid.has_above_one() && !grid.contour.empty();
  return {pass, fmt("PWC %lld, PWM %lld, SPO %lld, gamma %.5f; grid below 1: %s, above 1: %s, "
                    "contour points %zu",
                    static_cast<long long>(cost_pwc(c)), static_cast<long long>(cost_pwm(c)),
                    static_cast<long long>(cost_spo(c)), g, grid.has_below_one() ? "yes" : "no",
                    grid.has_above_one() ? "yes" : "no", grid.contour.size())};
}

Verdict round_trip() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kd(1, 4), md(1, 64);
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    PwmSequence seq;
    seq.tau = pos(rng);
    const int k = kd(rng);
    seq.amplitudes.resize(k);
    for (int i = 0; i < k; ++i) seq.amplitudes(i) = pos(rng);
    seq.widths.resize(k, md(rng));
    for (int i = 0; i < seq.widths.size(); ++i) seq.widths(i) = u(rng) * seq.tau;
    const PwmSequence back = pwm_approximate(inverse_pwm_pwc(seq), seq.amplitudes, seq.tau);
    worst = std::max(worst, (back.widths - seq.widths).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, fmt("100 sequences, max width error %.2e (need <= 1e-12)", worst)};
}

Verdict suzuki() {
  bool pass = true;
  std::string detail;
  for (int n = 2; n <= 5; ++n) {
    const long double s = suzuki_coefficient(n);
    const int e = 2 * n - 1;
    const long double residual = 2 * std::pow(s, e) + std::pow(1 - 2 * s, e);
    pass = pass && std::abs(residual) <= 1e-12L;
    detail += fmt("n=%d s=%.12f residual %.1e; ", n, static_cast<double>(s),
                  static_cast<double>(residual));
  }
  detail += "identity 2s^(2n-1) + (1-2s)^(2n-1) = 0, need <= 1e-12";
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "spectral match", 1.0, spectral_match},
      {2, "gaussian train match", 1.0, gaussian_match},
      {3, "local error orders", 10.0, local_orders},
      {4, "global error order", 10.0, global_order},
      {5, "dwell-time identities", 1.0, dwell_identities},
      {6, "gradient correctness", 60.0, gradient_check},
      {7, "ten-level convergence", 0.0, convergence},
      {8, "ten-level speedup", 0.0, speedup},
      {9, "optimized-field physics", 0.0, physics},
      {10, "cost model", 1.0, cost_model},
      {11, "approximate/inverse round trip", 1.0, round_trip},
      {12, "suzuki coefficient", 0.0, suzuki},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs >= c.budget_seconds) {
      v.pass = false;
      v.detail += fmt("; runtime over the %.0f s budget", c.budget_seconds);
    }
    if (!v.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

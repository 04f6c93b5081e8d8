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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pwmq/grape.hpp"

namespace pwmq {

Spectrum reconstructed_spectrum(const GrapeProblem& problem, const RealMatrix& widths) {
  PwmSequence seq{problem.tau, problem.amplitudes, widths};
  return spectrum(inverse_pwm_pwc(seq), 0);
}

bool peaks_match(const std::vector<SpectralPeak>& peaks, double first, double second,
                 double window) {
  if (peaks.size() < 2) return false;
  auto near = [window](double w, double target) { return std::abs(w - target) <= window; };
  const double a = peaks[0].omega;
  const double b = peaks[1].omega;
  return (near(a, first) && near(b, second)) || (near(a, second) && near(b, first));
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

BenchmarkRun make_run(int index, const char* scheme, const GrapeResult& r) {
  BenchmarkRun run;
  run.run = index;
  run.scheme = scheme;
  run.iterations = r.iterations;
  run.final_infidelity = r.trace.back();
  run.wall_seconds = r.wall_time;
  run.converged = r.converged;
  run.widths = r.widths;
  return run;
}

}  // namespace

BenchmarkReport run_fig5_benchmark(const GrapeProblem& problem,
                                   const BenchmarkOptions& options) {
  if (options.repeats < 1)
    throw Error(ErrorCategory::kValidation, "repeats must be at least 1");
  if (options.jobs < 1) throw Error(ErrorCategory::kValidation, "jobs must be at least 1");
  problem.intervals();

  const int per_run = options.include_pwc ? 2 : 1;
  std::vector<BenchmarkRun> slots(static_cast<size_t>(options.repeats) * per_run);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (int r = next++; r < options.repeats; r = next++) {
      try {
        const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(r);
        const RealMatrix init = random_initial_widths(problem, seed);
        GrapeOptions go = options.grape;
        go.rng_seed = seed;

        PwmObjective pwm(problem, /*use_cache=*/true);
        BenchmarkRun run = make_run(r + 1, "pwm", optimize(pwm, init, go));
        run.peaks = dominant_peaks(reconstructed_spectrum(problem, run.widths), 2,
                                   options.peak_window);
        slots[static_cast<size_t>(r) * per_run] = std::move(run);

        if (options.include_pwc) {
          PwcObjective pwc(problem);
          BenchmarkRun base = make_run(r + 1, "pwc", optimize(pwc, init, go));
          base.peaks = dominant_peaks(reconstructed_spectrum(problem, base.widths), 2,
                                      options.peak_window);
          slots[static_cast<size_t>(r) * per_run + 1] = std::move(base);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int threads = std::min(options.jobs, options.repeats);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  BenchmarkReport report;
  report.runs = std::move(slots);
  std::vector<double> pwm_times, pwc_times;
  for (const auto& run : report.runs) {
    if (run.scheme == "pwm") {
      pwm_times.push_back(run.wall_seconds);
      if (run.converged) {
        ++report.converged_pwm;
        if (peaks_match(run.peaks, kTenLevelTransition12, kTenLevelTransition24,
                        options.peak_window))
          ++report.physics_matches;
      }
    } else {
      pwc_times.push_back(run.wall_seconds);
      if (run.converged) ++report.converged_pwc;
    }
  }
  report.median_pwm_seconds = median(pwm_times);
  report.median_pwc_seconds = median(pwc_times);
  return report;
}

}  // namespace pwmq

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

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pwmq/costmodel.hpp"
#include "pwmq/grape.hpp"
#include "pwmq/model.hpp"
#include "pwmq/propagate.hpp"
#include "pwmq/pwm.hpp"

// CSV readers and writers for every artifact the CLI emits. Numbers are
// written in the shortest form that parses back to the same double, so a
// write/read cycle is bit-exact. Indices in files are 1-based.

namespace pwmq::io {

std::string format_double(double v);
/// Whole-field parse; throws Error(kParse) naming `what` on failure.
double parse_double(std::string_view text, std::string_view what = "number");
long long parse_int(std::string_view text, std::string_view what = "integer");

/// Lines starting with '#' are metadata; the first other line is the header.
struct CsvTable {
  std::vector<std::string> comments;  // without the leading '#', trimmed
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// key=value pairs found in the comment lines (space separated).
  std::map<std::string, std::string> metadata() const;
  int column(std::string_view name) const;  // -1 if absent
};

CsvTable read_csv(std::istream& in);

/// Fails with Error(kIo) if the file cannot be opened.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Field: `# dt=<v>` then `t,u_1,...,u_K`.
void write_field(std::ostream& out, const SampledField& field);
SampledField read_field(std::istream& in);

// Sequence: `# tau=<v> xi=<v1,...,vK>` then `m,t_center,w_1,...,w_K`.
void write_sequence(std::ostream& out, const PwmSequence& seq);
PwmSequence read_sequence(std::istream& in);

// Spectrum: `# samples=<S>` then `omega,magnitude,phase`.
void write_spectrum(std::ostream& out, const Spectrum& spec);
struct SpectrumRow {
  double omega, magnitude, phase;
};
std::vector<SpectrumRow> read_spectrum(std::istream& in);

// Propagator: `i,j,re,im`, N^2 rows in row-major order.
void write_propagator(std::ostream& out, const Matrix& u);
Matrix read_propagator(std::istream& in);

// Error-order table: `scheme,tau,error,slope,saturated`, the fit repeated on
// every row of its scheme.
struct SchemeFit {
  std::string scheme;
  ErrorOrderFit fit;
};
void write_error_orders(std::ostream& out, const std::vector<SchemeFit>& fits);

// GRAPE trace: `iteration,J`.
void write_trace(std::ostream& out, const std::vector<double>& trace);
std::vector<double> read_trace(std::istream& in);

// Benchmark: `run,scheme,iterations,final_J,wall_seconds,converged`.
void write_benchmark(std::ostream& out, const BenchmarkReport& report);
std::vector<BenchmarkRun> read_benchmark(std::istream& in);

// Cost model: `N,p,gamma` and `N,p_boundary`.
void write_gamma_grid(std::ostream& out, const GammaGrid& grid);
std::vector<GammaCell> read_gamma_grid(std::istream& in);
void write_gamma_contour(std::ostream& out, const GammaGrid& grid);
std::vector<BoundaryPoint> read_gamma_contour(std::istream& in);

// System JSON: {"dim": N, "drift": [[[re, im], ...], ...], "controls": [...]}.
std::string system_to_json(const ControlSystem& sys);
ControlSystem system_from_json(std::string_view text);

}  // namespace pwmq::io

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

#include "pwmq/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace pwmq::io {

namespace {

[[noreturn]] void parse_error(const std::string& msg) {
  throw Error(ErrorCategory::kParse, msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void expect_header(const CsvTable& t, const std::vector<std::string>& want,
                   std::string_view kind) {
  if (t.header != want) {
    std::string got;
    for (size_t i = 0; i < t.header.size(); ++i) got += (i ? "," : "") + t.header[i];
    parse_error(std::string(kind) + " CSV has unexpected header '" + got + "'");
  }
}

void check_width(const CsvTable& t, size_t r) {
  if (t.rows[r].size() != t.header.size())
    parse_error("row " + std::to_string(r + 1) + " has " +
                std::to_string(t.rows[r].size()) + " fields, expected " +
                std::to_string(t.header.size()));
}

// Header `prefix_1,...,prefix_K` starting at column `first`; returns K.
int numbered_columns(const CsvTable& t, size_t first, std::string_view prefix,
                     std::string_view kind) {
  const int k = static_cast<int>(t.header.size()) - static_cast<int>(first);
  if (k < 1) parse_error(std::string(kind) + " CSV has no control columns");
  for (int i = 0; i < k; ++i)
    if (t.header[first + i] != std::string(prefix) + "_" + std::to_string(i + 1))
      parse_error(std::string(kind) + " CSV column '" + t.header[first + i] +
                  "' should be " + std::string(prefix) + "_" + std::to_string(i + 1));
  return k;
}

std::string metadata_value(const CsvTable& t, const std::string& key,
                           std::string_view kind) {
  const auto meta = t.metadata();
  auto it = meta.find(key);
  if (it == meta.end())
    parse_error(std::string(kind) + " CSV lacks the '# " + key + "=' metadata line");
  return it->second;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorCategory::kIo, "number formatting failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    parse_error("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

long long parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    parse_error("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

std::map<std::string, std::string> CsvTable::metadata() const {
  std::map<std::string, std::string> out;
  for (const auto& c : comments) {
    std::istringstream ss(c);
    std::string token;
    while (ss >> token) {
      const auto eq = token.find('=');
      if (eq != std::string::npos) out[token.substr(0, eq)] = token.substr(eq + 1);
    }
  }
  return out;
}

int CsvTable::column(std::string_view name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      t.comments.emplace_back(trim(view.substr(1)));
      continue;
    }
    if (!have_header) {
      t.header = split(view, ',');
      have_header = true;
    } else {
      t.rows.push_back(split(view, ','));
    }
  }
  if (!have_header) parse_error("CSV input has no header line");
  return t;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::kIo, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCategory::kIo, "write to '" + path + "' failed");
}

void write_field(std::ostream& out, const SampledField& field) {
  check_field(field);
  out << "# dt=" << format_double(field.dt) << "\n";
  out << "t";
  for (int k = 0; k < field.controls(); ++k) out << ",u_" << k + 1;
  out << "\n";
  for (int j = 0; j < field.samples(); ++j) {
    out << format_double(field.time(j));
    for (int k = 0; k < field.controls(); ++k) out << "," << format_double(field.values(k, j));
    out << "\n";
  }
}

SampledField read_field(std::istream& in) {
  const CsvTable t = read_csv(in);
  if (t.header.empty() || t.header[0] != "t") parse_error("field CSV must start with column 't'");
  const int k = numbered_columns(t, 1, "u", "field");
  const int s = static_cast<int>(t.rows.size());
  if (s < 1) parse_error("field CSV has no samples");
  SampledField f;
  f.values.resize(k, s);
  std::vector<double> times(s);
  for (int j = 0; j < s; ++j) {
    check_width(t, j);
    times[j] = parse_double(t.rows[j][0], "time");
    for (int i = 0; i < k; ++i) f.values(i, j) = parse_double(t.rows[j][i + 1], "field value");
  }
  const auto meta = t.metadata();
  if (auto it = meta.find("dt"); it != meta.end()) {
    f.dt = parse_double(it->second, "dt");
  } else {
    f.dt = s > 1 ? times[1] - times[0] : 2.0 * times[0];
  }
  // Times must sit on the midpoint grid of dt.
  for (int j = 0; j < s; ++j)
    if (std::abs(times[j] - f.time(j)) > 1e-9 * std::max(1.0, f.duration()))
      parse_error("field CSV time in row " + std::to_string(j + 1) +
                  " is not on the uniform midpoint grid");
  check_field(f);
  return f;
}

void write_sequence(std::ostream& out, const PwmSequence& seq) {
  out << "# tau=" << format_double(seq.tau) << " xi=";
  for (Eigen::Index k = 0; k < seq.amplitudes.size(); ++k)
    out << (k ? "," : "") << format_double(seq.amplitudes(k));
  out << "\nm,t_center";
  for (int k = 0; k < seq.controls(); ++k) out << ",w_" << k + 1;
  out << "\n";
  for (int m = 0; m < seq.intervals(); ++m) {
    out << m + 1 << "," << format_double(seq.center(m));
    for (int k = 0; k < seq.controls(); ++k) out << "," << format_double(seq.widths(k, m));
    out << "\n";
  }
}

PwmSequence read_sequence(std::istream& in) {
  const CsvTable t = read_csv(in);
  if (t.header.size() < 2 || t.header[0] != "m" || t.header[1] != "t_center")
    parse_error("sequence CSV must start with columns 'm,t_center'");
  const int k = numbered_columns(t, 2, "w", "sequence");
  PwmSequence seq;
  seq.tau = parse_double(metadata_value(t, "tau", "sequence"), "tau");
  if (!(seq.tau > 0.0)) throw Error(ErrorCategory::kGrid, "sequence tau must be positive");
  const auto xi = split(metadata_value(t, "xi", "sequence"), ',');
  if (static_cast<int>(xi.size()) != k)
    parse_error("sequence CSV lists " + std::to_string(xi.size()) + " amplitudes for " +
                std::to_string(k) + " controls");
  seq.amplitudes.resize(k);
  for (int i = 0; i < k; ++i) seq.amplitudes(i) = parse_double(xi[i], "amplitude");
  const int m_count = static_cast<int>(t.rows.size());
  if (m_count < 1) parse_error("sequence CSV has no subintervals");
  seq.widths.resize(k, m_count);
  for (int m = 0; m < m_count; ++m) {
    check_width(t, m);
    if (parse_int(t.rows[m][0], "subinterval index") != m + 1)
      parse_error("sequence CSV subinterval indices must run 1..M in order");
    for (int i = 0; i < k; ++i) {
      const double w = parse_double(t.rows[m][i + 2], "width");
      if (std::abs(w) > seq.tau * (1.0 + 1e-12))
        throw Error(ErrorCategory::kAmplitudeBound,
                    "width w_" + std::to_string(i + 1) + "^(" + std::to_string(m + 1) +
                        ") exceeds tau");
      seq.widths(i, m) = w;
    }
  }
  return seq;
}

void write_spectrum(std::ostream& out, const Spectrum& spec) {
  out << "# samples=" << spec.samples << "\nomega,magnitude,phase\n";
  for (int i = 0; i < spec.size(); ++i)
    out << format_double(spec.omega(i)) << "," << format_double(spec.magnitude(i)) << ","
        << format_double(spec.phase(i)) << "\n";
}

std::vector<SpectrumRow> read_spectrum(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"omega", "magnitude", "phase"}, "spectrum");
  std::vector<SpectrumRow> rows;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    check_width(t, r);
    rows.push_back({parse_double(t.rows[r][0]), parse_double(t.rows[r][1]),
                    parse_double(t.rows[r][2])});
  }
  return rows;
}

void write_propagator(std::ostream& out, const Matrix& u) {
  out << "i,j,re,im\n";
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      out << i + 1 << "," << j + 1 << "," << format_double(u(i, j).real()) << ","
          << format_double(u(i, j).imag()) << "\n";
}

Matrix read_propagator(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"i", "j", "re", "im"}, "propagator");
  const auto n = static_cast<long long>(std::llround(std::sqrt(double(t.rows.size()))));
  if (n < 1 || n * n != static_cast<long long>(t.rows.size()))
    parse_error("propagator CSV row count is not a perfect square");
  Matrix u = Matrix::Zero(n, n);
  std::vector<bool> seen(n * n, false);
  for (size_t r = 0; r < t.rows.size(); ++r) {
    check_width(t, r);
    const long long i = parse_int(t.rows[r][0], "row index") - 1;
    const long long j = parse_int(t.rows[r][1], "column index") - 1;
    if (i < 0 || j < 0 || i >= n || j >= n || seen[i * n + j])
      parse_error("propagator CSV has a bad or repeated index in row " + std::to_string(r + 1));
    seen[i * n + j] = true;
    u(i, j) = Complex(parse_double(t.rows[r][2]), parse_double(t.rows[r][3]));
  }
  return u;
}

void write_error_orders(std::ostream& out, const std::vector<SchemeFit>& fits) {
  out << "scheme,tau,error,slope,saturated\n";
  for (const auto& f : fits)
    for (size_t i = 0; i < f.fit.taus.size(); ++i)
      out << f.scheme << "," << format_double(f.fit.taus[i]) << ","
          << format_double(f.fit.errors[i]) << "," << format_double(f.fit.slope) << ","
          << (f.fit.saturated ? 1 : 0) << "\n";
}

void write_trace(std::ostream& out, const std::vector<double>& trace) {
  out << "iteration,J\n";
  for (size_t i = 0; i < trace.size(); ++i) out << i << "," << format_double(trace[i]) << "\n";
}

std::vector<double> read_trace(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"iteration", "J"}, "trace");
  std::vector<double> out;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    check_width(t, r);
    out.push_back(parse_double(t.rows[r][1], "J"));
  }
  return out;
}

void write_benchmark(std::ostream& out, const BenchmarkReport& report) {
  out << "run,scheme,iterations,final_J,wall_seconds,converged\n";
  for (const auto& r : report.runs)
    out << r.run << "," << r.scheme << "," << r.iterations << ","
        << format_double(r.final_infidelity) << "," << format_double(r.wall_seconds) << ","
        << (r.converged ? 1 : 0) << "\n";
}

std::vector<BenchmarkRun> read_benchmark(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"run", "scheme", "iterations", "final_J", "wall_seconds", "converged"},
                "benchmark");
  std::vector<BenchmarkRun> runs;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    check_width(t, r);
    BenchmarkRun b;
    b.run = static_cast<int>(parse_int(t.rows[r][0], "run"));
    b.scheme = t.rows[r][1];
    b.iterations = static_cast<int>(parse_int(t.rows[r][2], "iterations"));
    b.final_infidelity = parse_double(t.rows[r][3], "final_J");
    b.wall_seconds = parse_double(t.rows[r][4], "wall_seconds");
    b.converged = parse_int(t.rows[r][5], "converged") != 0;
    runs.push_back(std::move(b));
  }
  return runs;
}

void write_gamma_grid(std::ostream& out, const GammaGrid& grid) {
  out << "# K=" << grid.k << "\nN,p,gamma\n";
  for (const auto& c : grid.cells)
    out << c.n << "," << c.p << "," << format_double(c.gamma) << "\n";
}

std::vector<GammaCell> read_gamma_grid(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"N", "p", "gamma"}, "grid");
  std::vector<GammaCell> cells;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    check_width(t, r);
    cells.push_back({parse_int(t.rows[r][0]), parse_int(t.rows[r][1]),
                     parse_double(t.rows[r][2])});
  }
  return cells;
}

void write_gamma_contour(std::ostream& out, const GammaGrid& grid) {
  out << "# K=" << grid.k << "\nN,p_boundary\n";
  for (const auto& b : grid.contour) out << b.n << "," << format_double(b.p_boundary) << "\n";
}

std::vector<BoundaryPoint> read_gamma_contour(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"N", "p_boundary"}, "contour");
  std::vector<BoundaryPoint> pts;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    check_width(t, r);
    pts.push_back({parse_int(t.rows[r][0]), parse_double(t.rows[r][1])});
  }
  return pts;
}

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    parse_error(where + " must be an array of " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      parse_error(where + " row " + std::to_string(r + 1) + " must have " +
                  std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const json& e = row[c];
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        parse_error(where + " entry (" + std::to_string(r + 1) + "," +
                    std::to_string(c + 1) + ") must be [re, im]");
      }
    }
  }
  return m;
}

}  // namespace

std::string system_to_json(const ControlSystem& sys) {
  json j;
  j["dim"] = sys.dim();
  j["drift"] = matrix_to_json(sys.drift);
  json controls = json::array();
  for (const auto& h : sys.controls) controls.push_back(matrix_to_json(h));
  j["controls"] = std::move(controls);
  return j.dump(2) + "\n";
}

ControlSystem system_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(std::string("malformed system JSON: ") + e.what());
  }
  if (!j.is_object()) parse_error("system JSON must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    parse_error("system JSON needs an integer 'dim'");
  const int n = j["dim"].get<int>();
  if (n < 1) throw Error(ErrorCategory::kValidation, "system dim must be positive");
  if (!j.contains("drift")) parse_error("system JSON needs 'drift'");
  if (!j.contains("controls") || !j["controls"].is_array())
    parse_error("system JSON needs a 'controls' array");
  ControlSystem sys;
  sys.drift = matrix_from_json(j["drift"], n, "drift");
  for (size_t k = 0; k < j["controls"].size(); ++k)
    sys.controls.push_back(
        matrix_from_json(j["controls"][k], n, "controls[" + std::to_string(k + 1) + "]"));
  require_valid(sys);
  return sys;
}

}  // namespace pwmq::io

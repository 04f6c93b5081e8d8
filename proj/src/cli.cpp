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

#include "pwmq/cli.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pwmq/costmodel.hpp"
#include "pwmq/grape.hpp"
#include "pwmq/io.hpp"

namespace pwmq::cli {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

// Output sink: a file when a path is given, the command's stdout otherwise.
void emit(std::ostream& out, const std::string& path,
          const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-") {
    writer(out);
    return;
  }
  std::ostringstream ss;
  writer(ss);
  io::write_text_file(path, ss.str());
}

template <typename Reader>
auto load(const std::string& path, Reader reader) {
  if (path.empty()) throw Error(ErrorCategory::kValidation, "missing input path");
  std::istringstream in(io::read_text_file(path));
  return reader(in);
}

ControlSystem load_system(const std::string& spec) {
  if (spec == "ten-level") return build_ten_level_system();
  if (spec == "two-level") return build_two_level_system();
  return io::system_from_json(io::read_text_file(spec));
}

RealVector to_vector(const std::vector<double>& v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

RealVector amplitudes_or(const std::vector<double>& given, const RealVector& fallback,
                         int controls) {
  if (given.empty()) return fallback;
  if (static_cast<int>(given.size()) != controls)
    throw Error(ErrorCategory::kValidation,
                "--xi needs " + std::to_string(controls) + " values, got " +
                    std::to_string(given.size()));
  return to_vector(given);
}

int control_index(int one_based, int controls) {
  if (one_based < 1 || one_based > controls)
    throw Error(ErrorCategory::kValidation,
                "--control must lie in 1.." + std::to_string(controls));
  return one_based - 1;
}

std::string with_suffix(const std::string& prefix, const std::string& suffix) {
  return prefix + "_" + suffix + ".csv";
}

double harmonic(const Spectrum& s, int h) { return s.magnitude(s.bin(static_cast<double>(h))); }

// Harmonic-content summary used by the demos: the fundamental relative to
// the input's, and the largest of harmonics 2..18 relative to the fundamental.
void report_harmonics(std::ostream& out, const std::string& label, const Spectrum& input,
                      const Spectrum& output) {
  const double h1_in = harmonic(input, 1);
  const double h1_out = harmonic(output, 1);
  double worst = 0.0;
  int worst_h = 2;
  for (int h = 2; h <= 18; ++h) {
    const double r = harmonic(output, h) / h1_out;
    if (r > worst) {
      worst = r;
      worst_h = h;
    }
  }
  out << label << ": harmonic 1 ratio " << h1_out / h1_in << ", largest of 2..18 is harmonic "
      << worst_h << " at " << worst << " of the fundamental\n";
}

// The options of one subcommand, kept so a config file can fill them in.
struct Command {
  CLI::App* app;
  std::function<int()> action;
};

// Applies JSON config values as option defaults so command-line flags still
// win. Top-level scalars go to every subcommand that has a matching option;
// an object keyed by a subcommand name applies only there.
void apply_config(const json& config, const std::vector<Command>& commands) {
  if (!config.is_object())
    throw Error(ErrorCategory::kParse, "config file must hold a JSON object");
  auto to_text = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return io::format_double(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_array()) {
      std::string s;
      for (size_t i = 0; i < v.size(); ++i) {
        if (!(v[i].is_number() || v[i].is_string()))
          throw Error(ErrorCategory::kParse, "config arrays may hold numbers or strings only");
        s += (i ? "," : "") +
             (v[i].is_string() ? v[i].get<std::string>()
                               : (v[i].is_number_float() ? io::format_double(v[i].get<double>())
                                                         : v[i].dump()));
      }
      return s;
    }
    throw Error(ErrorCategory::kParse, "unsupported config value " + v.dump());
  };
  auto set = [&](CLI::App* app, const std::string& key, const json& value) -> bool {
    CLI::Option* opt = nullptr;
    try {
      opt = app->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
    opt->run_callback_for_default()->default_str(to_text(value));
    opt->default_val(to_text(value));
    return true;
  };
  for (const auto& [key, value] : config.items()) {
    if (key == "config") continue;
    bool used = false;
    for (const auto& c : commands) {
      if (value.is_object() && c.app->get_name() == key) {
        for (const auto& [k2, v2] : value.items())
          if (!set(c.app, k2, v2))
            throw Error(ErrorCategory::kValidation,
                        "config key '" + key + "." + k2 + "' matches no option");
        used = true;
      } else if (!value.is_object()) {
        used = set(c.app, key, value) || used;
      }
    }
    if (!used)
      throw Error(ErrorCategory::kValidation, "config key '" + key + "' matches no option");
  }
}

std::string config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

int exit_code(ErrorCategory c) {
  return c == ErrorCategory::kNumerical ? kExitNumerical : kExitValidation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulse-width-modulated quantum control toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  app.add_option("--config", config_file,
                 "JSON file of option defaults; flags on the command line win");
  std::vector<Command> commands;

  // approximate ------------------------------------------------------------
  struct {
    std::string input, output;
    double tau = 0.0, cutoff = 0.0;
    std::vector<double> xi;
  } ap;
  {
    auto* c = app.add_subcommand("approximate", "Field CSV to pulse-width sequence CSV");
    c->add_option("--input", ap.input, "Field CSV (t,u_1..u_K)");
    c->add_option("--output", ap.output, "Sequence CSV (stdout if omitted)");
    c->add_option("--tau", ap.tau, "Subinterval length; must divide into whole samples");
    c->add_option("--cutoff", ap.cutoff,
                  "Cutoff frequency; chooses M = ceil(cutoff/omega_min) + 1 when --tau is unset");
    c->add_option("--xi", ap.xi, "Pulse amplitudes, one per control (default 1.05 max|u|)")
        ->delimiter(',');
    commands.push_back({c, [&] {
      const SampledField field = load(ap.input, io::read_field);
      double tau = ap.tau;
      if (!(tau > 0.0)) {
        if (!(ap.cutoff > 0.0))
          throw Error(ErrorCategory::kValidation, "approximate needs --tau or --cutoff");
        const int m = intervals_for_cutoff(ap.cutoff, 2.0 * kPi / field.duration());
        tau = field.duration() / m;
      }
      const RealVector xi =
          amplitudes_or(ap.xi, default_amplitudes(field), field.controls());
      const PwmSequence seq = pwm_approximate(field, xi, tau);
      emit(out, ap.output, [&](std::ostream& o) { io::write_sequence(o, seq); });
      return kExitOk;
    }});
  }

  // signal -----------------------------------------------------------------
  struct {
    std::string input, output, shape = "rect";
    double rate = 0.0;
    int control = 1;
  } sg;
  {
    auto* c = app.add_subcommand("signal", "Render a sequence as a rectangular or Gaussian train");
    c->add_option("--input", sg.input, "Sequence CSV");
    c->add_option("--output", sg.output, "Field CSV (stdout if omitted)");
    c->add_option("--shape", sg.shape, "rect or gauss")
        ->check(CLI::IsMember({"rect", "gauss"}));
    c->add_option("--rate", sg.rate, "Samples per unit time (default 1000 per subinterval)");
    c->add_option("--control", sg.control, "Control index, 1-based");
    commands.push_back({c, [&] {
      const PwmSequence seq = load(sg.input, io::read_sequence);
      const int k = control_index(sg.control, seq.controls());
      const double rate = sg.rate > 0.0 ? sg.rate : 1000.0 / seq.tau;
      const SampledField f =
          sg.shape == "rect" ? pwm_signal(seq, k, rate) : gaussian_train(seq, k, rate);
      emit(out, sg.output, [&](std::ostream& o) { io::write_field(o, f); });
      return kExitOk;
    }});
  }

  // reconstruct ------------------------------------------------------------
  struct {
    std::string input, output, mode = "pwc";
    double cutoff = 0.0;
  } rc;
  {
    auto* c = app.add_subcommand("reconstruct",
                                 "Sequence to piecewise-constant field, or signal to low-pass field");
    c->add_option("--input", rc.input, "Sequence CSV (pwc) or field CSV (lowpass)");
    c->add_option("--output", rc.output, "Field CSV (stdout if omitted)");
    c->add_option("--mode", rc.mode, "pwc or lowpass")->check(CLI::IsMember({"pwc", "lowpass"}));
    c->add_option("--cutoff", rc.cutoff, "Low-pass cutoff frequency");
    commands.push_back({c, [&] {
      SampledField f;
      if (rc.mode == "pwc") {
        f = inverse_pwm_pwc(load(rc.input, io::read_sequence));
      } else {
        if (!(rc.cutoff > 0.0))
          throw Error(ErrorCategory::kValidation, "lowpass reconstruction needs --cutoff");
        f = lowpass_reconstruct(load(rc.input, io::read_field), rc.cutoff);
      }
      emit(out, rc.output, [&](std::ostream& o) { io::write_field(o, f); });
      return kExitOk;
    }});
  }

  // spectrum ---------------------------------------------------------------
  struct {
    std::string input, output;
    int control = 1;
  } sp;
  {
    auto* c = app.add_subcommand("spectrum", "One-sided amplitude spectrum of a field CSV");
    c->add_option("--input", sp.input, "Field CSV");
    c->add_option("--output", sp.output, "Spectrum CSV (stdout if omitted)");
    c->add_option("--control", sp.control, "Control index, 1-based");
    commands.push_back({c, [&] {
      const SampledField f = load(sp.input, io::read_field);
      const Spectrum s = spectrum(f, control_index(sp.control, f.controls()));
      emit(out, sp.output, [&](std::ostream& o) { io::write_spectrum(o, s); });
      return kExitOk;
    }});
  }

  // propagate --------------------------------------------------------------
  struct {
    std::string system = "two-level", field, sequence, output, scheme = "pwm";
    double tau = 0.0, total = 0.0;
    int order = 2, resolution = 10000;
    std::vector<double> xi;
    bool no_cache = false;
  } pp;
  {
    auto* c = app.add_subcommand("propagate", "Propagator U(T, 0) as an i,j,re,im CSV");
    c->add_option("--system", pp.system, "System JSON, or the built-ins two-level / ten-level");
    c->add_option("--field", pp.field, "Field CSV, read as sample-and-hold");
    c->add_option("--sequence", pp.sequence, "Sequence CSV (PWM schemes only)");
    c->add_option("--scheme", pp.scheme, "pwc, spo, pwm, pwm2n, pwm4, pwm6, ... or reference");
    c->add_option("--order", pp.order, "n of S_2n for --scheme pwm2n");
    c->add_option("--tau", pp.tau, "Subinterval length for field input");
    c->add_option("--T", pp.total, "Total time for field input (default: field duration)");
    c->add_option("--R", pp.resolution, "Steps of the reference propagator");
    c->add_option("--xi", pp.xi, "Pulse amplitudes for PWM schemes (default 1.05 max|u|)")
        ->delimiter(',');
    c->add_flag("--no-cache", pp.no_cache, "Diagonalise every PWM factor afresh");
    c->add_option("--output", pp.output, "Propagator CSV (stdout if omitted)");
    commands.push_back({c, [&] {
      const ControlSystem sys = load_system(pp.system);
      require_valid(sys);
      const EvolveOptions eo{!pp.no_cache};
      Matrix u;
      if (!pp.sequence.empty()) {
        if (!pp.field.empty())
          throw Error(ErrorCategory::kValidation, "give --field or --sequence, not both");
        const PwmSequence seq = load(pp.sequence, io::read_sequence);
        u = evolve(sys, Scheme::parse(pp.scheme, pp.order), seq, eo);
      } else {
        // Without --field the controls are off: a zero field of length T.
        std::unique_ptr<ControlField> field;
        RealVector xi_default = RealVector::Ones(sys.num_controls());
        double duration = pp.total;
        if (!pp.field.empty()) {
          SampledField sampled = load(pp.field, io::read_field);
          if (sampled.controls() != sys.num_controls())
            throw Error(ErrorCategory::kValidation, "field and system control counts differ");
          xi_default = default_amplitudes(sampled);
          if (!(duration > 0.0)) duration = sampled.duration();
          field = std::make_unique<HeldField>(std::move(sampled));
        } else {
          const int k = sys.num_controls();
          field = std::make_unique<FunctionField>(
              [k](double) -> RealVector { return RealVector::Zero(k); }, k);
        }
        if (!(duration > 0.0)) throw Error(ErrorCategory::kValidation, "propagate needs --T");
        if (pp.scheme == "reference") {
          u = reference_propagator(sys, *field, 0.0, duration, pp.resolution);
        } else {
          if (!(pp.tau > 0.0)) throw Error(ErrorCategory::kValidation, "propagate needs --tau");
          const RealVector xi = amplitudes_or(pp.xi, xi_default, sys.num_controls());
          u = evolve(sys, Scheme::parse(pp.scheme, pp.order), *field, duration, pp.tau, &xi, eo);
        }
      }
      emit(out, pp.output, [&](std::ostream& o) { io::write_propagator(o, u); });
      return kExitOk;
    }});
  }

  // error-order ------------------------------------------------------------
  struct {
    std::vector<std::string> schemes{"pwc", "spo", "pwm", "pwm4"};
    std::vector<double> taus{0.2, 0.1, 0.05, 0.025};
    bool global = false;
    double total = 10.0, t_start = 1.0;
    int resolution = 10000, global_resolution = 200000;
    std::string output;
  } eo;
  {
    auto* c = app.add_subcommand(
        "error-order", "Fit error-vs-tau slopes on the driven qubit H = sz + sin(t) sx");
    c->add_option("--schemes", eo.schemes, "Schemes to fit")->delimiter(',');
    c->add_option("--taus", eo.taus, "Step sizes, at least 4, geometrically spaced")
        ->delimiter(',');
    c->add_flag("--global", eo.global, "Accumulated error over [0, T] instead of one step");
    c->add_option("--T", eo.total, "Horizon for --global");
    c->add_option("--t-start", eo.t_start, "Start of the single step for local errors");
    c->add_option("--R", eo.resolution, "Reference steps per tau (local)");
    c->add_option("--global-R", eo.global_resolution, "Reference steps over [0, T] (global)");
    c->add_option("--output", eo.output, "Error table CSV (stdout if omitted)");
    commands.push_back({c, [&] {
      const ControlSystem sys = build_two_level_system();
      const FunctionField field(
          [](double t) -> RealVector { return RealVector::Constant(1, std::sin(t)); }, 1);
      ErrorOrderOptions opt;
      opt.t_start = eo.t_start;
      opt.resolution = eo.resolution;
      opt.total_time = eo.total;
      opt.global_resolution = eo.global_resolution;
      opt.amplitudes = RealVector::Ones(1);
      std::vector<io::SchemeFit> fits;
      for (const auto& name : eo.schemes) {
        const Scheme scheme = Scheme::parse(name);
        fits.push_back({scheme.name(), eo.global
                                           ? global_error_order(sys, scheme, field, eo.taus, opt)
                                           : error_order(sys, scheme, field, eo.taus, opt)});
      }
      emit(out, eo.output, [&](std::ostream& o) { io::write_error_orders(o, fits); });
      if (!eo.output.empty())
        for (const auto& f : fits)
          out << f.scheme << " slope " << f.fit.slope << (f.fit.saturated ? " (saturated)" : "")
              << "\n";
      return kExitOk;
    }});
  }

  // optimize ---------------------------------------------------------------
  struct {
    std::string system = "ten-level", scheme = "pwm", prefix = "optimize";
    int initial = 1, target = 4, max_iterations = 5000;
    double total = 100.0, tau = 0.1, tolerance = 1e-3, step = 0.01, init_range = 0.5;
    std::vector<double> xi;
    std::uint64_t seed = 1;
  } op;
  {
    auto* c = app.add_subcommand("optimize", "GRAPE state transfer over pulse widths");
    c->add_option("--system", op.system, "System JSON, or the built-ins ten-level / two-level");
    c->add_option("--initial", op.initial, "Initial basis state, 1-based");
    c->add_option("--target", op.target, "Target basis state, 1-based");
    c->add_option("--T", op.total, "Total time");
    c->add_option("--tau", op.tau, "Subinterval length");
    c->add_option("--xi", op.xi, "Pulse amplitudes (default 1)")->delimiter(',');
    c->add_option("--scheme", op.scheme, "pwm or pwc (basic GRAPE)")
        ->check(CLI::IsMember({"pwm", "pwc"}));
    c->add_option("--tolerance", op.tolerance, "Stop once J falls to this value");
    c->add_option("--max-iterations", op.max_iterations, "Iteration limit");
    c->add_option("--step", op.step, "Initial gradient step");
    c->add_option("--seed", op.seed, "Seed of the random initial field");
    c->add_option("--init-range", op.init_range, "Initial field uniform in [-r, r]");
    c->add_option("--output-prefix", op.prefix,
                  "Writes <prefix>_trace/_sequence/_field/_spectrum.csv");
    commands.push_back({c, [&] {
      ControlSystem sys = load_system(op.system);
      require_valid(sys);
      const int n = sys.dim();
      if (op.initial < 1 || op.initial > n || op.target < 1 || op.target > n)
        throw Error(ErrorCategory::kValidation, "--initial/--target must lie in 1.." +
                                                    std::to_string(n));
      const int k = sys.num_controls();
      GrapeProblem problem{std::move(sys), StateVector::basis(n, op.initial - 1),
                           StateVector::basis(n, op.target - 1), op.total, op.tau,
                           amplitudes_or(op.xi, RealVector::Ones(k), k)};
      GrapeOptions go;
      go.max_iterations = op.max_iterations;
      go.tolerance = op.tolerance;
      go.initial_step = op.step;
      go.rng_seed = op.seed;
      const RealMatrix init = random_initial_widths(problem, op.seed, op.init_range);
      GrapeResult result;
      if (op.scheme == "pwm") {
        PwmObjective obj(problem);
        result = optimize(obj, init, go);
      } else {
        PwcObjective obj(problem);
        result = optimize(obj, init, go);
      }
      const PwmSequence seq{problem.tau, problem.amplitudes, result.widths};
      emit(out, with_suffix(op.prefix, "trace"),
           [&](std::ostream& o) { io::write_trace(o, result.trace); });
      emit(out, with_suffix(op.prefix, "sequence"),
           [&](std::ostream& o) { io::write_sequence(o, seq); });
      emit(out, with_suffix(op.prefix, "field"),
           [&](std::ostream& o) { io::write_field(o, inverse_pwm_pwc(seq)); });
      emit(out, with_suffix(op.prefix, "spectrum"), [&](std::ostream& o) {
        io::write_spectrum(o, reconstructed_spectrum(problem, result.widths));
      });
      out << op.scheme << ": J=" << result.trace.back() << " after " << result.iterations
          << " iterations, " << result.wall_time << " s (" << result.stop_reason << ")\n";
      return kExitOk;
    }});
  }

  // benchmark-fig5 ---------------------------------------------------------
  struct {
    int repeats = 25, jobs = 1, max_iterations = 5000;
    std::uint64_t seed = 1;
    double tolerance = 1e-3, tau = 0.1, total = 100.0;
    std::string scheme = "both", prefix = "fig5";
  } bm;
  {
    auto* c = app.add_subcommand("benchmark-fig5",
                                 "Seeded PWM-GRAPE vs basic GRAPE runs on the ten-level problem");
    c->add_option("--repeats", bm.repeats, "Number of seeded runs");
    c->add_option("--seed", bm.seed, "Run r uses seed + r - 1");
    c->add_option("--tolerance", bm.tolerance, "Target infidelity");
    c->add_option("--tau", bm.tau, "Subinterval length");
    c->add_option("--T", bm.total, "Total time");
    c->add_option("--scheme", bm.scheme, "both or pwm")->check(CLI::IsMember({"both", "pwm"}));
    c->add_option("--jobs", bm.jobs, "Runs executed concurrently");
    c->add_option("--max-iterations", bm.max_iterations, "Iteration limit per run");
    c->add_option("--output-prefix", bm.prefix,
                  "Writes <prefix>_runs.csv, <prefix>_field.csv, <prefix>_spectrum.csv");
    commands.push_back({c, [&] {
      GrapeProblem problem = ten_level_problem();
      problem.tau = bm.tau;
      problem.total_time = bm.total;
      BenchmarkOptions bo;
      bo.repeats = bm.repeats;
      bo.seed = bm.seed;
      bo.jobs = bm.jobs;
      bo.include_pwc = bm.scheme == "both";
      bo.grape.tolerance = bm.tolerance;
      bo.grape.max_iterations = bm.max_iterations;
      const BenchmarkReport report = run_fig5_benchmark(problem, bo);
      emit(out, with_suffix(bm.prefix, "runs"),
           [&](std::ostream& o) { io::write_benchmark(o, report); });
      // Field and spectrum of the best PWM run.
      const BenchmarkRun* best = nullptr;
      for (const auto& r : report.runs)
        if (r.scheme == "pwm" && (!best || r.final_infidelity < best->final_infidelity)) best = &r;
      const PwmSequence seq{problem.tau, problem.amplitudes, best->widths};
      emit(out, with_suffix(bm.prefix, "field"),
           [&](std::ostream& o) { io::write_field(o, inverse_pwm_pwc(seq)); });
      emit(out, with_suffix(bm.prefix, "spectrum"), [&](std::ostream& o) {
        io::write_spectrum(o, reconstructed_spectrum(problem, best->widths));
      });
      out << "pwm converged " << report.converged_pwm << "/" << bm.repeats
          << ", median wall time " << report.median_pwm_seconds << " s\n";
      if (bo.include_pwc)
        out << "pwc converged " << report.converged_pwc << "/" << bm.repeats
            << ", median wall time " << report.median_pwc_seconds << " s\n"
            << "median time ratio pwm/pwc " << report.speed_ratio() << "\n";
      out << "converged pwm runs with peaks near 4 and 3: " << report.physics_matches << "\n";
      return kExitOk;
    }});
  }

  // complexity -------------------------------------------------------------
  struct {
    long long k = 1, n_min = 2, n_max = 200, p_min = 2, p_max = 30;
    std::string prefix = "complexity";
  } cx;
  {
    auto* c = app.add_subcommand("complexity", "Multiplication-count ratio grid gamma(N, p)");
    c->add_option("--K", cx.k, "Number of controls");
    c->add_option("--Nmin", cx.n_min, "Smallest dimension");
    c->add_option("--Nmax", cx.n_max, "Largest dimension");
    c->add_option("--pmin", cx.p_min, "Smallest series order");
    c->add_option("--pmax", cx.p_max, "Largest series order");
    c->add_option("--output-prefix", cx.prefix,
                  "Writes <prefix>_grid.csv and <prefix>_contour.csv");
    commands.push_back({c, [&] {
      const GammaGrid grid = gamma_grid(cx.n_min, cx.n_max, cx.p_min, cx.p_max, cx.k);
      emit(out, with_suffix(cx.prefix, "grid"),
           [&](std::ostream& o) { io::write_gamma_grid(o, grid); });
      emit(out, with_suffix(cx.prefix, "contour"),
           [&](std::ostream& o) { io::write_gamma_contour(o, grid); });
      return kExitOk;
    }});
  }

  // demo-fig1 / demo-fig4 --------------------------------------------------
  struct {
    std::string prefix1 = "fig1", prefix4 = "fig4";
    int per_interval = 1024, signal_samples = 1 << 14;
    double cutoff = 19.0;
  } dm;
  auto demo_sequence = [&](SampledField& field) {
    const int m = 20;
    const double tau = 2.0 * kPi / m;
    field = SampledField::from_function(
        [](double t) -> RealVector { return RealVector::Constant(1, std::sin(t)); }, 1,
        tau / dm.per_interval, m * dm.per_interval);
    return pwm_approximate(field, RealVector::Ones(1), tau);
  };
  {
    auto* c = app.add_subcommand("demo-fig1", "sin(t) over one period, M = 20, xi = 1");
    c->add_option("--output-prefix", dm.prefix1,
                  "Writes <prefix>_field/_sequence/_signal/_spectrum/_input_spectrum.csv");
    c->add_option("--samples-per-interval", dm.per_interval, "Field samples per subinterval");
    c->add_option("--signal-samples", dm.signal_samples, "Samples of the rendered train");
    commands.push_back({c, [&] {
      SampledField field;
      const PwmSequence seq = demo_sequence(field);
      const double rate = dm.signal_samples / seq.duration();
      const SampledField sig = pwm_signal(seq, 0, rate);
      const Spectrum in_spec = spectrum(field, 0);
      const Spectrum sig_spec = spectrum(sig, 0);
      emit(out, with_suffix(dm.prefix1, "field"), [&](std::ostream& o) { io::write_field(o, field); });
      emit(out, with_suffix(dm.prefix1, "sequence"),
           [&](std::ostream& o) { io::write_sequence(o, seq); });
      emit(out, with_suffix(dm.prefix1, "signal"), [&](std::ostream& o) { io::write_field(o, sig); });
      emit(out, with_suffix(dm.prefix1, "spectrum"),
           [&](std::ostream& o) { io::write_spectrum(o, sig_spec); });
      emit(out, with_suffix(dm.prefix1, "input_spectrum"),
           [&](std::ostream& o) { io::write_spectrum(o, in_spec); });
      report_harmonics(out, "rectangular train", in_spec, sig_spec);
      return kExitOk;
    }});
  }
  {
    auto* c = app.add_subcommand("demo-fig4",
                                 "Gaussian train and low-pass reconstruction of the same sequence");
    c->add_option("--output-prefix", dm.prefix4,
                  "Writes <prefix>_gaussian/_gaussian_spectrum/_lowpass/_lowpass_spectrum.csv");
    c->add_option("--samples-per-interval", dm.per_interval, "Field samples per subinterval");
    c->add_option("--signal-samples", dm.signal_samples, "Samples of the rendered trains");
    c->add_option("--cutoff", dm.cutoff, "Low-pass cutoff frequency");
    commands.push_back({c, [&] {
      SampledField field;
      const PwmSequence seq = demo_sequence(field);
      const double rate = dm.signal_samples / seq.duration();
      const SampledField gauss = gaussian_train(seq, 0, rate);
      const SampledField low = lowpass_reconstruct(pwm_signal(seq, 0, rate), dm.cutoff);
      const Spectrum in_spec = spectrum(field, 0);
      const Spectrum g_spec = spectrum(gauss, 0);
      const Spectrum l_spec = spectrum(low, 0);
      emit(out, with_suffix(dm.prefix4, "gaussian"), [&](std::ostream& o) { io::write_field(o, gauss); });
      emit(out, with_suffix(dm.prefix4, "gaussian_spectrum"),
           [&](std::ostream& o) { io::write_spectrum(o, g_spec); });
      emit(out, with_suffix(dm.prefix4, "lowpass"), [&](std::ostream& o) { io::write_field(o, low); });
      emit(out, with_suffix(dm.prefix4, "lowpass_spectrum"),
           [&](std::ostream& o) { io::write_spectrum(o, l_spec); });
      report_harmonics(out, "gaussian train", in_spec, g_spec);
      report_harmonics(out, "low-pass reconstruction", in_spec, l_spec);
      return kExitOk;
    }});
  }

  // ten-level --------------------------------------------------------------
  std::string tl_output;
  {
    auto* c = app.add_subcommand("ten-level", "Write the ten-level benchmark system as JSON");
    c->add_option("--output", tl_output, "System JSON (stdout if omitted)");
    commands.push_back({c, [&] {
      const std::string text = io::system_to_json(build_ten_level_system());
      emit(out, tl_output, [&](std::ostream& o) { o << text; });
      return kExitOk;
    }});
  }

  try {
    const std::string cfg = config_path(argc, argv);
    if (!cfg.empty()) {
      json config;
      try {
        config = json::parse(io::read_text_file(cfg));
      } catch (const json::parse_error& e) {
        throw Error(ErrorCategory::kParse, std::string("malformed config JSON: ") + e.what());
      }
      apply_config(config, commands);
    }
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      err << "error:usage: " << e.what() << "\n";
      return kExitValidation;
    }
    for (const auto& c : commands)
      if (c.app->parsed()) return c.action();
    err << "error:usage: no subcommand given\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error:" << category_name(e.category()) << ": " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const CLI::Error& e) {
    err << "error:validation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::bad_alloc&) {
    err << "error:numerical: out of memory\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error:numerical: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace pwmq::cli

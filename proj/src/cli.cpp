#include "adhesion/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "adhesion/closed_form.hpp"
#include "adhesion/errors.hpp"
#include "adhesion/implicit_solver.hpp"
#include "adhesion/presets.hpp"

namespace adhesion::cli {

using json = nlohmann::ordered_json;

std::string format_number(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const SolutionSeries& series) {
  os << "t,x,m,v\n";
  for (const auto& s : series.states) {
    os << format_number(s.t) << ',' << format_number(s.x) << ',' << format_number(s.m) << ','
       << format_number(s.v) << '\n';
  }
}

namespace {

json scenario_json(const Scenario& s) {
  json j;
  j["label"] = s.label();
  j["m0"] = s.m0();
  j["v0"] = s.v0();
  if (const auto* p = as_power_law(s.drag())) {
    j["lambda"] = p->lambda;
    j["alpha"] = p->alpha;
  }
  return j;
}

}  // namespace

void write_json(std::ostream& os, const SolutionSeries& series) {
  json j;
  j["scenario"] = scenario_json(series.scenario);
  j["method"] = to_string(series.method);
  j["tolerances"] = {{"rel_tol", series.tolerances.rel_tol},
                     {"abs_tol", series.tolerances.abs_tol},
                     {"max_evaluations", series.tolerances.max_evaluations},
                     {"root_tol", series.tolerances.root_tol}};
  json states = json::array();
  for (const auto& s : series.states) {
    states.push_back({{"t", s.t}, {"x", s.x}, {"m", s.m}, {"v", s.v}});
  }
  j["states"] = std::move(states);
  os << j.dump(2) << '\n';
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(std::string_view text) {
  const std::string t = trim(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') {
    ++first;
  }
  const auto res = std::from_chars(first, last, value);
  if (t.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

SampleFile parse_sample_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto error = [&](const std::string& what) {
    fail(ErrorKind::validation, "line " + std::to_string(line_no) + ": " + what);
  };

  SampleFile file{SampleAxis::time, {}};
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) {
      continue;
    }
    if (!have_header) {
      if (row == "t,m") {
        file.axis = SampleAxis::time;
      } else if (row == "x,m") {
        file.axis = SampleAxis::position;
      } else {
        error("expected header 't,m' or 'x,m', got '" + row + "'");
      }
      have_header = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
      error("expected two comma-separated values");
    }
    const auto independent = parse_double(std::string_view(row).substr(0, comma));
    const auto mass = parse_double(std::string_view(row).substr(comma + 1));
    if (!independent || !mass) {
      error("malformed number in '" + row + "'");
    }
    file.samples.push_back({*independent, *mass});
  }
  if (!have_header) {
    line_no = std::max<std::size_t>(line_no, 1);
    error("missing header");
  }
  return file;
}

namespace {

// Flat run configuration; every field optional until validated.
struct RunConfig {
  std::optional<std::string> preset;
  std::optional<double> v0, m0, lambda, alpha;
  std::optional<std::string> label;
  std::optional<double> t_end, x_end;
  std::optional<std::size_t> samples;
  std::optional<std::string> method;
  std::optional<std::string> format;
  std::optional<std::string> output;
  std::optional<double> rel_tol, abs_tol;

  template <class T>
  static void merge(std::optional<T>& into, const std::optional<T>& from) {
    if (from) {
      into = from;
    }
  }

  void override_with(const RunConfig& o) {
    merge(preset, o.preset);
    merge(v0, o.v0);
    merge(m0, o.m0);
    merge(lambda, o.lambda);
    merge(alpha, o.alpha);
    merge(label, o.label);
    merge(t_end, o.t_end);
    merge(x_end, o.x_end);
    merge(samples, o.samples);
    merge(method, o.method);
    merge(format, o.format);
    merge(output, o.output);
    merge(rel_tol, o.rel_tol);
    merge(abs_tol, o.abs_tol);
  }
};

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::validation, "cannot open config file '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::validation, "config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) {
    fail(ErrorKind::validation, "config file must hold a flat JSON object");
  }

  RunConfig c;
  auto number = [&](const std::string& key, const json& v) {
    if (!v.is_number()) {
      fail(ErrorKind::validation, "config key '" + key + "' must be a number");
    }
    return v.get<double>();
  };
  auto text = [&](const std::string& key, const json& v) {
    if (!v.is_string()) {
      fail(ErrorKind::validation, "config key '" + key + "' must be a string");
    }
    return v.get<std::string>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "preset") c.preset = text(key, v);
    else if (key == "v0") c.v0 = number(key, v);
    else if (key == "m0") c.m0 = number(key, v);
    else if (key == "lambda") c.lambda = number(key, v);
    else if (key == "alpha") c.alpha = number(key, v);
    else if (key == "label") c.label = text(key, v);
    else if (key == "t_end") c.t_end = number(key, v);
    else if (key == "x_end") c.x_end = number(key, v);
    else if (key == "samples") {
      if (!v.is_number_unsigned()) {
        fail(ErrorKind::validation, "config key 'samples' must be a non-negative integer");
      }
      c.samples = v.get<std::size_t>();
    } else if (key == "method") c.method = text(key, v);
    else if (key == "format") c.format = text(key, v);
    else if (key == "output") c.output = text(key, v);
    else if (key == "rel_tol") c.rel_tol = number(key, v);
    else if (key == "abs_tol") c.abs_tol = number(key, v);
    else fail(ErrorKind::validation, "unknown config key '" + key + "'");
  }
  return c;
}

Scenario build_scenario(const RunConfig& c) {
  const bool inline_source = c.m0 || c.lambda || c.alpha;
  if (c.preset.has_value() == inline_source) {
    fail(ErrorKind::validation,
         "give exactly one scenario source: --preset, or --m0/--lambda/--alpha");
  }
  if (!c.v0) {
    fail(ErrorKind::validation, "--v0 is required");
  }
  if (c.preset) {
    auto s = preset(parse_preset(*c.preset), *c.v0);
    return c.label ? Scenario(s.m0(), s.v0(), s.drag(), *c.label) : s;
  }
  if (!c.m0 || !c.lambda || !c.alpha) {
    fail(ErrorKind::validation, "inline scenario needs all of --m0, --lambda and --alpha");
  }
  return Scenario(*c.m0, *c.v0, power_law(*c.lambda, *c.alpha), c.label.value_or("inline"));
}

Horizon build_horizon(const RunConfig& c, std::optional<double> default_t_end) {
  if (c.t_end && c.x_end) {
    fail(ErrorKind::validation, "give only one of --t-end and --x-end");
  }
  if (c.x_end) {
    return PositionHorizon{*c.x_end};
  }
  if (c.t_end) {
    return TimeHorizon{*c.t_end};
  }
  if (default_t_end) {
    return TimeHorizon{*default_t_end};
  }
  fail(ErrorKind::validation, "a horizon is required: --t-end or --x-end");
}

Method parse_method(const std::string& name) {
  if (name == "closed" || name == "closed_form") return Method::closed_form;
  if (name == "implicit" || name == "implicit_inversion") return Method::implicit_inversion;
  if (name == "ode") return Method::ode;
  fail(ErrorKind::validation, "unknown method '" + name + "' (closed, implicit, ode)");
}

numerics::SolverConfig solver_config(const RunConfig& c, Method method) {
  auto cfg = method == Method::ode ? numerics::SolverConfig::ode()
                                   : numerics::SolverConfig::quadrature();
  if (c.rel_tol) cfg.rel_tol = *c.rel_tol;
  if (c.abs_tol) cfg.abs_tol = *c.abs_tol;
  cfg.validate();
  return cfg;
}

SolutionSeries run_series(const Scenario& s, const Horizon& h, std::size_t samples, Method method,
                          const numerics::SolverConfig& cfg) {
  TrajectoryRequest req{s, h, samples, method, cfg};
  return integrate_trajectory(req);
}

// Write to --output or to `out`.
template <class Writer>
void emit(const std::optional<std::string>& path, std::ostream& out, Writer&& writer) {
  if (!path || *path == "-") {
    writer(out);
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) {
    fail(ErrorKind::validation, "cannot open output file '" + *path + "'");
  }
  writer(file);
}

double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double max_deviation(const SolutionSeries& a, const SolutionSeries& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const auto& p = a.states[i];
    const auto& q = b.states[i];
    worst = std::max({worst, relative_deviation(p.t, q.t), relative_deviation(p.x, q.x),
                      relative_deviation(p.m, q.m), relative_deviation(p.v, q.v)});
  }
  return worst;
}

// Metric value, or null where the model leaves it undefined.
template <class F>
json metric(F&& f) {
  try {
    const double v = f();
    return std::isinf(v) ? json("infinite") : json(v);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::no_solution || e.kind() == ErrorKind::degenerate) {
      return nullptr;
    }
    throw;
  }
}

// Registers the options shared by the scenario-driven subcommands.
void add_scenario_options(CLI::App* cmd, RunConfig& flags, std::string& config_path) {
  cmd->add_option("--config", config_path, "Flat JSON file with RunConfig keys; flags override it");
  cmd->add_option("--preset", flags.preset, "table_tennis_water | table_tennis_air");
  cmd->add_option("--v0", flags.v0, "Initial velocity [m/s]");
  cmd->add_option("--m0", flags.m0, "Initial mass [kg] (inline scenario)");
  cmd->add_option("--lambda", flags.lambda, "Drag coefficient lambda (inline scenario)");
  cmd->add_option("--alpha", flags.alpha, "Drag exponent alpha (inline scenario)");
  cmd->add_option("--label", flags.label, "Scenario label");
}

RunConfig resolve(const RunConfig& flags, const std::string& config_path) {
  RunConfig c;
  if (!config_path.empty()) {
    c = load_config_file(config_path);
  }
  c.override_with(flags);
  return c;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::non_convergence:
    case ErrorKind::singularity:
      return kSolverFailure;
    default:
      return kInputError;
  }
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mass, velocity and position of a body accreting a resting resistive medium"};
  app.name(args.empty() ? "adhesion" : args.front());
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path;
  std::optional<double> threshold;
  std::string data_path;
  double lambda0 = 1e-4;
  double alpha0 = 0.5;

  auto* simulate = app.add_subcommand("simulate", "Sample a trajectory as CSV or JSON rows (t, x, m, v)");
  add_scenario_options(simulate, flags, config_path);
  simulate->add_option("--t-end", flags.t_end, "Time horizon [s]");
  simulate->add_option("--x-end", flags.x_end, "Distance horizon [m]");
  simulate->add_option("--samples", flags.samples, "Number of samples (>= 2, default 11)");
  simulate->add_option("--method", flags.method, "closed | implicit | ode (default closed)");
  simulate->add_option("--format", flags.format, "csv | json (default csv)");
  simulate->add_option("--output", flags.output, "Output path (default standard output)");
  simulate->add_option("--rel-tol", flags.rel_tol, "Relative tolerance of the numerical routes");
  simulate->add_option("--abs-tol", flags.abs_tol, "Absolute tolerance of the numerical routes");

  auto* metrics = app.add_subcommand("metrics", "Doubling time, doubling distance and maximum range as JSON");
  add_scenario_options(metrics, flags, config_path);

  auto* compare = app.add_subcommand("compare", "Max relative deviation between closed form, implicit inversion and ODE");
  add_scenario_options(compare, flags, config_path);
  compare->add_option("--t-end", flags.t_end, "Time horizon [s] (default 10)");
  compare->add_option("--x-end", flags.x_end, "Distance horizon [m]");
  compare->add_option("--samples", flags.samples, "Grid size (default 20)");
  compare->add_option("--threshold", threshold, "Pass threshold on relative deviation (default 1e-6)");

  auto* fit = app.add_subcommand("fit", "Fit (lambda, alpha) to a t,m or x,m sample file");
  fit->add_option("--data", data_path, "CSV sample file with header t,m or x,m")->required();
  fit->add_option("--m0", flags.m0, "Initial mass [kg]")->required();
  fit->add_option("--v0", flags.v0, "Initial velocity [m/s]")->required();
  fit->add_option("--lambda0", lambda0, "Initial lambda guess (default 1e-4)");
  fit->add_option("--alpha0", alpha0, "Initial alpha guess (default 0.5)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (simulate->parsed()) {
      const RunConfig c = resolve(flags, config_path);
      const Scenario s = build_scenario(c);
      const Horizon h = build_horizon(c, std::nullopt);
      const Method method = parse_method(c.method.value_or("closed"));
      const std::string format = c.format.value_or("csv");
      if (format != "csv" && format != "json") {
        fail(ErrorKind::validation, "unknown format '" + format + "' (csv, json)");
      }
      const auto series = run_series(s, h, c.samples.value_or(11), method, solver_config(c, method));
      emit(c.output, out, [&](std::ostream& os) {
        format == "csv" ? write_csv(os, series) : write_json(os, series);
      });
      return kSuccess;
    }

    if (metrics->parsed()) {
      const Scenario s = build_scenario(resolve(flags, config_path));
      json j;
      j["doubling_time"] = metric([&] { return doubling_time(s); });
      j["doubling_distance"] = metric([&] { return doubling_distance(s); });
      j["max_range"] = metric([&] { return max_range(s); });
      out << j.dump(2) << '\n';
      return kSuccess;
    }

    if (compare->parsed()) {
      const RunConfig c = resolve(flags, config_path);
      const Scenario s = build_scenario(c);
      const Horizon h = build_horizon(c, 10.0);
      const std::size_t n = c.samples.value_or(20);
      const double limit = threshold.value_or(1e-6);
      const auto closed = run_series(s, h, n, Method::closed_form, numerics::SolverConfig::quadrature());
      const auto implicit =
          run_series(s, h, n, Method::implicit_inversion, numerics::SolverConfig::quadrature());
      const auto ode = run_series(s, h, n, Method::ode, numerics::SolverConfig::ode());

      json j;
      j["closed_vs_implicit"] = max_deviation(closed, implicit);
      j["closed_vs_ode"] = max_deviation(closed, ode);
      j["implicit_vs_ode"] = max_deviation(implicit, ode);
      j["threshold"] = limit;
      const bool pass = j["closed_vs_implicit"].get<double>() <= limit &&
                        j["closed_vs_ode"].get<double>() <= limit &&
                        j["implicit_vs_ode"].get<double>() <= limit;
      j["pass"] = pass;
      out << j.dump(2) << '\n';
      return pass ? kSuccess : kComparisonFailed;
    }

    if (fit->parsed()) {
      std::ifstream in(data_path);
      if (!in) {
        fail(ErrorKind::validation, "cannot open sample file '" + data_path + "'");
      }
      const auto file = parse_sample_csv(in);
      const auto result =
          fit_power_law(file.axis, file.samples, *flags.m0, *flags.v0, PowerLaw{lambda0, alpha0});
      json j;
      j["lambda"] = result.lambda;
      j["alpha"] = result.alpha;
      j["rms_residual"] = result.rms_residual;
      j["iterations"] = result.iterations;
      j["converged"] = result.converged;
      j["warnings"] = result.warnings;
      out << j.dump(2) << '\n';
      return result.converged ? kSuccess : kSolverFailure;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kInputError;
}

}  // namespace adhesion::cli

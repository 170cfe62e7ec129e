#include "qkdbound/cli.hpp"

#include "qkdbound/attack_lab.hpp"
#include "qkdbound/report.hpp"
#include "qkdbound/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qkdbound::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string scheme = "bb84";
  std::optional<double> theta;
  std::optional<double> gamma;
  std::optional<double> pe;
  int n = 7;
  std::string var = "gamma";
  std::string range;
  std::string format;
  std::string out;
  std::string config;
  std::uint64_t seed = 42;
  std::string suite = "all";
};

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

template <typename T>
void assign(T& target, const std::string& key, const std::string& text) {
  if (!CLI::detail::lexical_cast(text, target)) {
    throw UsageError("config value for '" + key + "' is invalid: " + text);
  }
}

template <typename T>
void assign(std::optional<T>& target, const std::string& key, const std::string& text) {
  T v{};
  assign(v, key, text);
  target = v;
}

// Fills every option of `sub` that was not given on the command line from
// the config file. Flags win over the file; the file wins over defaults.
void apply_config(CLI::App& sub, Settings& s) {
  if (s.config.empty()) return;
  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
      {"scheme", [&](auto& k, auto& v) { assign(s.scheme, k, v); }},
      {"theta", [&](auto& k, auto& v) { assign(s.theta, k, v); }},
      {"gamma", [&](auto& k, auto& v) { assign(s.gamma, k, v); }},
      {"pe", [&](auto& k, auto& v) { assign(s.pe, k, v); }},
      {"n", [&](auto& k, auto& v) { assign(s.n, k, v); }},
      {"var", [&](auto& k, auto& v) { assign(s.var, k, v); }},
      {"range", [&](auto& k, auto& v) { assign(s.range, k, v); }},
      {"format", [&](auto& k, auto& v) { assign(s.format, k, v); }},
      {"out", [&](auto& k, auto& v) { assign(s.out, k, v); }},
      {"seed", [&](auto& k, auto& v) { assign(s.seed, k, v); }},
      {"suite", [&](auto& k, auto& v) { assign(s.suite, k, v); }},
  };
  for (const auto& [key, value] : read_config(s.config)) {
    const auto* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || setters.count(key) == 0) {
      throw UsageError("config key '" + key + "' does not apply to '" + sub.get_name() + "'");
    }
    if (opt->count() == 0) setters.at(key)(key, value);
  }
}

attack::Scheme make_scheme(const Settings& s) {
  if (s.scheme == "bb84") return attack::Scheme::four_state(attack::Basis::x);
  if (s.scheme != "b92") throw UsageError("--scheme must be bb84 or b92");
  if (!s.theta) throw UsageError("--theta is required for the b92 scheme");
  if (!(*s.theta > 0.0 && *s.theta < std::numbers::pi / 4.0)) {
    throw UsageError("--theta must lie in (0, pi/4) radians");
  }
  return attack::Scheme::two_state(*s.theta);
}

void check_n(int n) {
  if (n < 1) throw UsageError("--n must be a positive integer");
}

std::string fmt(double v) { return report::format_double(v); }

void print_matrix(std::ostream& out, const std::string& title, const qstate::Matrix& m) {
  out << title << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << ' ';
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << " (" << fmt(m(r, c).real()) << ", " << fmt(m(r, c).imag()) << ')';
    }
    out << '\n';
  }
}

void print_analysis(std::ostream& out, const attack::AttackAnalysis& a) {
  const auto row = report::make_row(a);
  auto field = [&](const char* name, const std::string& value) {
    out << name << std::string(24 - std::string(name).size(), ' ') << value << '\n';
  };
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string("-"); };
  field("scheme", row.scheme);
  field("theta", opt(row.theta));
  field("gamma", fmt(a.gamma));
  field("n", std::to_string(a.n));
  field("p_e", fmt(a.p_e));
  field("p_e_conditional", opt(a.p_e_conditional));
  field("x", fmt(a.x));
  field("z", fmt(a.z));
  field("radius", fmt(a.pair.radius));
  field("beta", fmt(a.beta));
  field("beta_pole", fmt(a.beta_pole));
  field("bound_bits", fmt(a.bound_bits));
  field("error_rate_bound_bits", opt(a.error_rate_bound_bits));
  const auto labels = a.scheme.labels();
  for (std::size_t i = 0; i < 2; ++i) {
    print_matrix(out, "bob_state label=" + std::to_string(labels[i]), a.bob_states[i].entries());
  }
  for (std::size_t i = 0; i < 2; ++i) {
    print_matrix(out,
                 "eve_state label=" + std::to_string(labels[i]) + " weight=" + fmt(a.eve_weights[i]),
                 a.eve_states[i].entries());
  }
}

void emit_rows(const Settings& s, const std::vector<report::ReportRow>& rows, std::ostream& out) {
  std::ostringstream buffer;
  if (s.format == "json") {
    report::write_json(buffer, rows);
  } else {
    report::write_csv(buffer, rows);
  }
  if (s.out.empty()) {
    out << buffer.str();
    return;
  }
  std::ofstream file(s.out, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file: " + s.out);
  file << buffer.str();
  if (!file.flush()) throw std::runtime_error("failed writing output file: " + s.out);
}

int cmd_analyze(const Settings& s, std::ostream& out) {
  const auto scheme = make_scheme(s);
  check_n(s.n);
  if (s.gamma.has_value() == s.pe.has_value()) throw UsageError("give exactly one of --gamma or --pe");
  if (!s.format.empty() && s.format != "text" && s.format != "csv" && s.format != "json") {
    throw UsageError("--format must be text, csv or json");
  }
  double gamma = 0.0;
  if (s.gamma) {
    if (!(*s.gamma >= 0.0 && *s.gamma < std::numbers::pi / 2.0)) {
      throw UsageError("--gamma must lie in [0, pi/2) radians");
    }
    gamma = *s.gamma;
  } else {
    if (!(*s.pe >= 0.0 && *s.pe < attack::max_error_rate(scheme))) {
      throw UsageError("--pe is not attainable for this scheme");
    }
    gamma = attack::gamma_for_error_rate(scheme, *s.pe);
  }
  const auto analysis = attack::analyze({gamma, scheme}, s.n);
  if (s.format.empty() || s.format == "text") {
    print_analysis(out, analysis);
  } else {
    emit_rows(s, {report::make_row(analysis)}, out);
  }
  return kExitOk;
}

int cmd_sweep(const Settings& s, std::ostream& out) {
  report::SweepSpec spec;
  spec.scheme = make_scheme(s);
  if (s.var == "gamma") {
    spec.variable = report::SweepVariable::gamma;
  } else if (s.var == "pe") {
    spec.variable = report::SweepVariable::p_e;
  } else if (s.var == "n") {
    spec.variable = report::SweepVariable::n;
  } else {
    throw UsageError("--var must be gamma, pe or n");
  }
  if (!s.format.empty() && s.format != "csv" && s.format != "json") {
    throw UsageError("--format must be csv or json");
  }
  if (s.range.empty()) throw UsageError("--range start:stop:steps is required");
  if (spec.variable == report::SweepVariable::n && !s.gamma) {
    throw UsageError("--gamma is required when sweeping n");
  }
  try {
    spec.range = report::parse_range(s.range);
    if (s.gamma) spec.gamma = *s.gamma;
    spec.n = s.n;
    report::validate(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit_rows(s, report::run_sweep(spec), out);
  return kExitOk;
}

int cmd_verify(const Settings& s, std::ostream& out) {
  if (!verify::is_suite_name(s.suite)) throw UsageError("--suite must be formulas, oracles, geometry or all");
  return verify::run(s.suite, s.seed, out) ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eavesdropper information bounds for symmetric collective attacks on QKD"};
  app.require_subcommand(1);
  Settings s;

  auto* analyze = app.add_subcommand("analyze", "Single-point attack analysis");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV or JSON");
  auto* verify = app.add_subcommand("verify", "Run the self-check suites");

  for (auto* sub : {analyze, sweep}) {
    sub->add_option("--scheme", s.scheme, "bb84 or b92");
    sub->add_option("--theta", s.theta, "Two-state half-angle in radians, (0, pi/4)");
    sub->add_option("--gamma", s.gamma, "Probe rotation angle in radians, [0, pi/2)");
    sub->add_option("--n", s.n, "Length of the string behind the parity bit");
    sub->add_option("--format", s.format, sub == analyze ? "text, csv or json" : "csv or json");
    sub->add_option("--out", s.out, "Output path (default: standard output)");
    sub->add_option("--config", s.config, "Flat key=value file; flags take precedence");
  }
  analyze->add_option("--pe", s.pe, "Target error rate (alternative to --gamma)");
  sweep->add_option("--var", s.var, "Swept variable: gamma, pe or n");
  sweep->add_option("--range", s.range, "start:stop:steps (inclusive, steps >= 2)");
  verify->add_option("--suite", s.suite, "formulas, oracles, geometry or all");
  verify->add_option("--seed", s.seed, "Seed for the randomized checks");
  verify->add_option("--config", s.config, "Flat key=value file; flags take precedence");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) {
      apply_config(*analyze, s);
      return cmd_analyze(s, out);
    }
    if (sweep->parsed()) {
      apply_config(*sweep, s);
      return cmd_sweep(s, out);
    }
    apply_config(*verify, s);
    return cmd_verify(s, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace qkdbound::cli

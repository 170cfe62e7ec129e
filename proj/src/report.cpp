#include "qkdbound/report.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qkdbound::report {

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const auto pos = line.find(sep, begin);
    out.emplace_back(line.substr(begin, pos == std::string_view::npos ? pos : pos - begin));
    if (pos == std::string_view::npos) break;
    begin = pos + 1;
  }
  return out;
}

double parse_double(const std::string& text, const char* field) {
  if (text.empty()) throw std::invalid_argument(std::string("empty numeric field: ") + field);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw std::invalid_argument(std::string("bad number in field ") + field + ": " + text);
  }
  return v;
}

std::optional<double> parse_optional(const std::string& text, const char* field) {
  if (text.empty()) return std::nullopt;
  return parse_double(text, field);
}

int parse_int(const std::string& text, const char* field) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("bad integer in field ") + field + ": " + text);
  }
  if (used != text.size()) {
    throw std::invalid_argument(std::string("bad integer in field ") + field + ": " + text);
  }
  return v;
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string scheme_name(const attack::Scheme& s) {
  return s.kind() == attack::SchemeKind::four_state ? "bb84" : "b92";
}

}  // namespace

ReportRow make_row(const attack::AttackAnalysis& a) {
  ReportRow row;
  row.scheme = scheme_name(a.scheme);
  if (a.scheme.kind() == attack::SchemeKind::two_state) row.theta = a.scheme.theta();
  row.gamma = a.gamma;
  row.p_e = a.p_e;
  row.p_e_conditional = a.p_e_conditional;
  row.x = a.x;
  row.z = a.z;
  row.beta = a.beta;
  row.n = a.n;
  row.bound_bits = a.bound_bits;
  return row;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv_line(const ReportRow& r) {
  std::ostringstream os;
  os << r.scheme << ',' << optional_text(r.theta) << ',' << format_double(r.gamma) << ','
     << format_double(r.p_e) << ',' << optional_text(r.p_e_conditional) << ','
     << format_double(r.x) << ',' << format_double(r.z) << ',' << format_double(r.beta) << ','
     << r.n << ',' << format_double(r.bound_bits);
  return os.str();
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << to_csv_line(r) << '\n';
}

std::vector<ReportRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("read_csv: missing or unexpected header");
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) throw std::invalid_argument("read_csv: expected 10 fields: " + line);
    ReportRow r;
    r.scheme = f[0];
    if (r.scheme != "bb84" && r.scheme != "b92") {
      throw std::invalid_argument("read_csv: unknown scheme " + r.scheme);
    }
    r.theta = parse_optional(f[1], "theta");
    r.gamma = parse_double(f[2], "gamma");
    r.p_e = parse_double(f[3], "p_e");
    r.p_e_conditional = parse_optional(f[4], "p_e_conditional");
    r.x = parse_double(f[5], "x");
    r.z = parse_double(f[6], "z");
    r.beta = parse_double(f[7], "beta");
    r.n = parse_int(f[8], "n");
    r.bound_bits = parse_double(f[9], "bound_bits");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_json(std::ostream& out, const std::vector<ReportRow>& rows) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["scheme"] = r.scheme;
    o["theta"] = opt(r.theta);
    o["gamma"] = r.gamma;
    o["p_e"] = r.p_e;
    o["p_e_conditional"] = opt(r.p_e_conditional);
    o["x"] = r.x;
    o["z"] = r.z;
    o["beta"] = r.beta;
    o["n"] = r.n;
    o["bound_bits"] = r.bound_bits;
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << '\n';
}

SweepRange parse_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:steps");
  return {parse_double(parts[0], "range start"), parse_double(parts[1], "range stop"),
          parse_int(parts[2], "range steps")};
}

double grid_value(const SweepRange& range, int i) {
  if (i == range.steps - 1) return range.stop;
  return range.start + (range.stop - range.start) * static_cast<double>(i) /
                           static_cast<double>(range.steps - 1);
}

void validate(const SweepSpec& spec) {
  const auto& r = spec.range;
  if (r.steps < 2) throw std::invalid_argument("sweep: steps must be at least 2");
  if (!(r.start < r.stop)) throw std::invalid_argument("sweep: start must be below stop");
  switch (spec.variable) {
    case SweepVariable::gamma:
      if (!(r.start >= 0.0 && r.stop < std::numbers::pi / 2.0)) {
        throw std::invalid_argument("sweep: gamma range must lie in [0, pi/2)");
      }
      break;
    case SweepVariable::p_e:
      if (!(r.start >= 0.0 && r.stop < attack::max_error_rate(spec.scheme))) {
        throw std::invalid_argument("sweep: error-rate range is not attainable for this scheme");
      }
      break;
    case SweepVariable::n:
      for (int i = 0; i < r.steps; ++i) {
        const double v = grid_value(r, i);
        if (std::abs(v - std::round(v)) > 1e-9 || std::round(v) < 1.0) {
          throw std::invalid_argument("sweep: n grid points must be positive integers");
        }
      }
      break;
  }
  if (spec.variable != SweepVariable::gamma && !(spec.gamma >= 0.0 && spec.gamma < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("sweep: gamma must lie in [0, pi/2)");
  }
  if (spec.variable != SweepVariable::n && spec.n < 1) {
    throw std::invalid_argument("sweep: n must be at least 1");
  }
}

std::vector<ReportRow> run_sweep(const SweepSpec& spec) {
  validate(spec);
  std::vector<ReportRow> rows;
  rows.reserve(static_cast<std::size_t>(spec.range.steps));
  for (int i = 0; i < spec.range.steps; ++i) {
    const double v = grid_value(spec.range, i);
    attack::AttackParams params{spec.gamma, spec.scheme};
    int n = spec.n;
    switch (spec.variable) {
      case SweepVariable::gamma: params.gamma = v; break;
      case SweepVariable::p_e: params.gamma = attack::gamma_for_error_rate(spec.scheme, v); break;
      case SweepVariable::n: n = static_cast<int>(std::lround(v)); break;
    }
    rows.push_back(make_row(attack::analyze(params, n)));
  }
  return rows;
}

}  // namespace qkdbound::report

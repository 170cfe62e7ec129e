// Flat report rows for single-point analyses and parameter sweeps.

#pragma once

#include "qkdbound/attack_lab.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qkdbound::report {

inline constexpr std::string_view kCsvHeader =
    "scheme,theta,gamma,p_e,p_e_conditional,x,z,beta,n,bound_bits";

struct ReportRow {
  std::string scheme;  // "bb84" or "b92"
  std::optional<double> theta;
  double gamma = 0.0;
  double p_e = 0.0;
  std::optional<double> p_e_conditional;
  double x = 0.0;
  double z = 0.0;
  double beta = 0.0;
  int n = 1;
  double bound_bits = 0.0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

ReportRow make_row(const attack::AttackAnalysis& analysis);

/// 17 significant digits; round-trips every double.
std::string format_double(double v);

std::string to_csv_line(const ReportRow& row);
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);
/// Throws std::invalid_argument on a malformed header or row.
std::vector<ReportRow> read_csv(std::istream& in);

/// Array of flat objects with the CSV field names; inapplicable fields are null.
void write_json(std::ostream& out, const std::vector<ReportRow>& rows);

enum class SweepVariable { gamma, p_e, n };

struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;
};

struct SweepSpec {
  attack::Scheme scheme = attack::Scheme::four_state();
  SweepVariable variable = SweepVariable::gamma;
  SweepRange range;
  double gamma = 0.1;  // fixed value when gamma is not swept
  int n = 7;           // fixed value when n is not swept
};

/// Parses "start:stop:steps".
SweepRange parse_range(std::string_view text);

/// Grid point i of `steps` evenly spaced values from start to stop inclusive.
double grid_value(const SweepRange& range, int i);

/// Throws std::invalid_argument on steps < 2, start >= stop, non-integer n
/// grid points, or values outside the operations' domains.
void validate(const SweepSpec& spec);

/// One row per grid point in ascending order of the swept variable.
std::vector<ReportRow> run_sweep(const SweepSpec& spec);

}  // namespace qkdbound::report

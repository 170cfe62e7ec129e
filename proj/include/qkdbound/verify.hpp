// Self-check suites behind `qkdbound verify`.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qkdbound::verify {

struct Check {
  std::string name;
  double worst = 0.0;  // worst observed deviation (or the checked quantity)
  double limit = 0.0;
  bool passed = false;
};

/// Pipeline vs closed-form matrices and error rates on the (theta, gamma) grid.
std::vector<Check> formulas_suite();

/// Decomposition reconstruction, angle identities and frame invariance on
/// seeded random equal-radius pairs.
std::vector<Check> geometry_suite(std::uint64_t seed, int pairs = 1000, int rotations = 100);

/// Oracle sandwich and joint-formula agreement on parity ensembles. Prints
/// the ratio table to `table`.
std::vector<Check> oracles_suite(std::uint64_t seed, std::ostream& table);

bool is_suite_name(std::string_view name);

/// Runs `suite` in {formulas, oracles, geometry, all}, prints one line per
/// check, returns true iff every check passed.
bool run(std::string_view suite, std::uint64_t seed, std::ostream& out);

}  // namespace qkdbound::verify

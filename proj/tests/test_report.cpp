#include "qkdbound/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace qkdbound;
using report::SweepSpec;
using report::SweepVariable;

namespace {

std::string csv_of(const std::vector<report::ReportRow>& rows) {
  std::ostringstream out;
  report::write_csv(out, rows);
  return out.str();
}

SweepSpec gamma_sweep() {
  SweepSpec spec;
  spec.variable = SweepVariable::gamma;
  spec.range = {0.01, 0.2, 20};
  spec.n = 7;
  return spec;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 0.0099667110793791886, 1e-300, 123456.789, 0.0}) {
    CHECK(std::stod(report::format_double(v)) == v);
  }
  CHECK(report::format_double(0.2) == "0.20000000000000001");
  CHECK(report::format_double(0.0) == "0");
}

TEST_CASE("CSV rows") {
  const auto row = report::make_row(attack::analyze({0.2, attack::Scheme::four_state()}, 7));
  CHECK(row.scheme == "bb84");
  CHECK_FALSE(row.theta.has_value());
  CHECK_FALSE(row.p_e_conditional.has_value());
  const auto line = report::to_csv_line(row);
  CHECK(line.rfind("bb84,,0.20000000000000001,", 0) == 0);
  CHECK(line.find(",,") != std::string::npos);

  const auto b92 = report::make_row(attack::analyze({0.2, attack::Scheme::two_state(0.3926990817)}, 7));
  CHECK(report::to_csv_line(b92) ==
        "b92,0.39269908170000001,0.20000000000000001,0.0008961546791682708,0.001822098488365842,"
        "0.083659260041732228,0.99311555138849306,0.042020392001711843,7,0.00022968623698533234");

  const auto text = csv_of({row, b92});
  CHECK(text.rfind(std::string(report::kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("CSV round trip is byte-identical") {
  auto spec = gamma_sweep();
  const auto text = csv_of(report::run_sweep(spec));
  std::istringstream in(text);
  const auto parsed = report::read_csv(in);
  CHECK(parsed.size() == 20);
  CHECK(csv_of(parsed) == text);
  CHECK(parsed == report::run_sweep(spec));

  spec.scheme = attack::Scheme::two_state(std::numbers::pi / 8);
  const auto text2 = csv_of(report::run_sweep(spec));
  std::istringstream in2(text2);
  CHECK(csv_of(report::read_csv(in2)) == text2);
}

TEST_CASE("CSV reader rejects malformed input") {
  std::istringstream no_header("bb84,,0.1,0,,0,1,0,3,0\n");
  CHECK_THROWS_AS(report::read_csv(no_header), std::invalid_argument);
  std::istringstream short_row(std::string(report::kCsvHeader) + "\nbb84,,0.1\n");
  CHECK_THROWS_AS(report::read_csv(short_row), std::invalid_argument);
  std::istringstream bad_number(std::string(report::kCsvHeader) + "\nbb84,,x,0,,0,1,0,3,0\n");
  CHECK_THROWS_AS(report::read_csv(bad_number), std::invalid_argument);
  std::istringstream bad_scheme(std::string(report::kCsvHeader) + "\nxyz,,0.1,0,,0,1,0,3,0\n");
  CHECK_THROWS_AS(report::read_csv(bad_scheme), std::invalid_argument);
}

TEST_CASE("JSON mirrors the CSV rows") {
  const auto rows = report::run_sweep(gamma_sweep());
  std::ostringstream out;
  report::write_json(out, rows);
  const auto j = nlohmann::json::parse(out.str());
  REQUIRE(j.is_array());
  REQUIRE(j.size() == rows.size());
  const std::vector<std::string> keys{"scheme", "theta", "gamma", "p_e", "p_e_conditional",
                                      "x", "z", "beta", "n", "bound_bits"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& o = j[i];
    CHECK(o.size() == keys.size());
    for (const auto& k : keys) CHECK(o.contains(k));
    CHECK(o["theta"].is_null());
    CHECK(o["p_e_conditional"].is_null());
    CHECK(o["gamma"].get<double>() == rows[i].gamma);
    CHECK(o["bound_bits"].get<double>() == rows[i].bound_bits);
    CHECK(o["n"].get<int>() == 7);
  }
  std::ostringstream again;
  report::write_json(again, rows);
  CHECK(again.str() == out.str());
}

TEST_CASE("gamma sweep") {
  const auto rows = report::run_sweep(gamma_sweep());
  REQUIRE(rows.size() == 20);
  CHECK(rows.front().gamma == 0.01);
  CHECK(rows.back().gamma == 0.2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].gamma > rows[i - 1].gamma);
    CHECK(rows[i].bound_bits > rows[i - 1].bound_bits);
  }
}

TEST_CASE("n sweep decays log-linearly") {
  SweepSpec spec;
  spec.variable = SweepVariable::n;
  spec.range = {3, 9, 4};
  spec.gamma = 0.1;
  const auto rows = report::run_sweep(spec);
  REQUIRE(rows.size() == 4);
  const double beta = rows[0].beta;
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].n == 3 + 2 * static_cast<int>(i));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].bound_bits < rows[i - 1].bound_bits);
    const double step = std::log(rows[i].bound_bits / std::sqrt(rows[i].n + 1.0)) -
                        std::log(rows[i - 1].bound_bits / std::sqrt(rows[i - 1].n + 1.0));
    CHECK(std::abs(step - std::log(2 * beta)) <= 1e-9);
  }
}

TEST_CASE("error-rate sweep returns the requested rates") {
  for (const auto& scheme : {attack::Scheme::four_state(), attack::Scheme::two_state(std::numbers::pi / 6)}) {
    SweepSpec spec;
    spec.scheme = scheme;
    spec.variable = SweepVariable::p_e;
    spec.range = {0.001, 0.05, 15};
    const auto rows = report::run_sweep(spec);
    REQUIRE(rows.size() == 15);
    for (int i = 0; i < 15; ++i) {
      CHECK(std::abs(rows[static_cast<std::size_t>(i)].p_e - report::grid_value(spec.range, i)) <= 1e-12);
    }
  }
}

TEST_CASE("ranges and validation") {
  const auto r = report::parse_range("0.01:0.2:20");
  CHECK(r.start == 0.01);
  CHECK(r.stop == 0.2);
  CHECK(r.steps == 20);
  CHECK(report::grid_value(r, 19) == 0.2);
  CHECK_THROWS_AS(report::parse_range("0.1:0.2"), std::invalid_argument);
  CHECK_THROWS_AS(report::parse_range("a:0.2:3"), std::invalid_argument);

  auto bad = [](SweepVariable v, report::SweepRange range) {
    SweepSpec spec;
    spec.variable = v;
    spec.range = range;
    return spec;
  };
  CHECK_THROWS_AS(report::validate(bad(SweepVariable::gamma, {0.1, 0.2, 1})), std::invalid_argument);
  CHECK_THROWS_AS(report::validate(bad(SweepVariable::gamma, {0.2, 0.1, 5})), std::invalid_argument);
  CHECK_THROWS_AS(report::validate(bad(SweepVariable::gamma, {0.1, 2.0, 5})), std::invalid_argument);
  CHECK_THROWS_AS(report::validate(bad(SweepVariable::p_e, {0.1, 0.6, 5})), std::invalid_argument);
  CHECK_THROWS_AS(report::validate(bad(SweepVariable::n, {3, 8, 4})), std::invalid_argument);
  CHECK_THROWS_AS(report::validate(bad(SweepVariable::n, {0, 4, 5})), std::invalid_argument);
  CHECK_NOTHROW(report::validate(bad(SweepVariable::n, {3, 9, 4})));
}

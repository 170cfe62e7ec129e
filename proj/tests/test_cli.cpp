#include "qkdbound/cli.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using qkdbound::cli::kExitFailure;
using qkdbound::cli::kExitOk;
using qkdbound::cli::kExitUsage;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qkdbound");
  std::ostringstream out, err;
  const int code = qkdbound::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qkdbound_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

// Runs the installed binary through the shell and captures stdout.
Result run_binary(const std::string& args) {
  const std::string cmd = std::string(QKD_CLI_PATH) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe.release());
  return {WEXITSTATUS(status), out, ""};
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"analyze", "--scheme", "e91", "--gamma", "0.1"}).code == kExitUsage);
  CHECK(run({"analyze", "--scheme", "b92", "--gamma", "0.1"}).code == kExitUsage);
  CHECK(run({"analyze", "--scheme", "b92", "--theta", "0.9", "--gamma", "0.1"}).code == kExitUsage);
  CHECK(run({"analyze", "--gamma", "0.1", "--pe", "0.01"}).code == kExitUsage);
  CHECK(run({"analyze"}).code == kExitUsage);
  CHECK(run({"analyze", "--gamma", "2"}).code == kExitUsage);
  CHECK(run({"analyze", "--gamma", "abc"}).code == kExitUsage);
  CHECK(run({"analyze", "--gamma", "0.1", "--n", "0"}).code == kExitUsage);
  CHECK(run({"analyze", "--gamma", "0.1", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"analyze", "--pe", "0.7"}).code == kExitUsage);
  CHECK(run({"analyze", "--gamma", "0.1", "--frobnicate"}).code == kExitUsage);
  CHECK(run({"sweep", "--range", "0.1:0.2"}).code == kExitUsage);
  CHECK(run({"sweep", "--range", "0.2:0.1:5"}).code == kExitUsage);
  CHECK(run({"sweep", "--var", "theta", "--range", "0.1:0.2:5"}).code == kExitUsage);
  CHECK(run({"sweep", "--var", "n", "--range", "3:9:4"}).code == kExitUsage);
  CHECK(run({"sweep", "--range", "0.1:0.2:5", "--format", "text"}).code == kExitUsage);
  CHECK(run({"verify", "--suite", "everything"}).code == kExitUsage);
  const auto r = run({"analyze", "--scheme", "b92", "--gamma", "0.1"});
  CHECK(r.err.find("--theta") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("runtime failures exit with 1") {
  const auto r = run({"sweep", "--range", "0.1:0.2:3", "--out", "/nonexistent-dir/x/y.csv"});
  CHECK(r.code == kExitFailure);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("help exits with 0") {
  const auto r = run({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("analyze") != std::string::npos);
}

TEST_CASE("analyze text layout") {
  const auto r = run({"analyze", "--scheme", "bb84", "--gamma", "0.2", "--n", "7"});
  REQUIRE(r.code == kExitOk);
  for (const char* field : {"scheme                  bb84\n", "p_e                     0.0099667110793791886\n",
                            "beta                    0.10197848123224777\n", "bob_state label=0\n",
                            "bob_state label=2\n", "eve_state label=0 weight=",
                            "p_e_conditional         -\n"}) {
    CHECK(r.out.find(field) != std::string::npos);
  }
  CHECK(r.out == run({"analyze", "--scheme", "bb84", "--gamma", "0.2", "--n", "7"}).out);
}

TEST_CASE("analyze by error rate") {
  const auto r = run({"analyze", "--pe", "0.0099667110793791886", "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("bb84,,0.2000000000") != std::string::npos);
}

TEST_CASE("analyze matches the golden files") {
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases{
      {"analyze_bb84_gamma0.csv", {"--scheme", "bb84", "--gamma", "0", "--n", "7"}},
      {"analyze_bb84_gamma0.2.csv", {"--scheme", "bb84", "--gamma", "0.2", "--n", "7"}},
      {"analyze_b92_theta0.3927_gamma0.2.csv",
       {"--scheme", "b92", "--theta", "0.3926990817", "--gamma", "0.2", "--n", "7"}},
  };
  for (const auto& [file, flags] : cases) {
    auto args = flags;
    args.insert(args.begin(), "analyze");
    args.push_back("--format");
    args.push_back("csv");
    const auto golden = slurp(fs::path(QKD_GOLDEN_DIR) / file);
    REQUIRE_FALSE(golden.empty());
    const auto r = run(args);
    CHECK(r.code == kExitOk);
    CHECK(r.out == golden);

    std::string line;
    for (std::size_t i = 1; i < args.size(); ++i) line += " " + args[i];
    const auto bin = run_binary("analyze" + line);
    CHECK(bin.code == kExitOk);
    CHECK(bin.out == golden);
  }
}

TEST_CASE("sweep output is deterministic") {
  const std::vector<std::string> args{"sweep", "--scheme", "bb84", "--var", "gamma", "--range", "0.01:0.2:20", "--n", "7"};
  const auto a = run(args), b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  std::size_t lines = 0;
  for (char c : a.out) lines += c == '\n';
  CHECK(lines == 21);
  CHECK(a.out.rfind("scheme,theta,gamma,p_e,p_e_conditional,x,z,beta,n,bound_bits\n", 0) == 0);

  const auto path = scratch("sweep.csv");
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path.string()});
  const auto c = run(with_out);
  CHECK(c.code == kExitOk);
  CHECK(c.out.empty());
  CHECK(slurp(path) == a.out);

  const auto bin1 = run_binary("sweep --scheme b92 --theta 0.5 --var pe --range 0.001:0.02:7");
  const auto bin2 = run_binary("sweep --scheme b92 --theta 0.5 --var pe --range 0.001:0.02:7");
  CHECK(bin1.code == kExitOk);
  CHECK(bin1.out == bin2.out);
}

TEST_CASE("sweep JSON") {
  const auto r = run({"sweep", "--var", "n", "--gamma", "0.1", "--range", "3:9:4", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.front() == '[');
  CHECK(r.out.find("\"bound_bits\"") != std::string::npos);
  CHECK(r.out.find("\"theta\": null") != std::string::npos);
}

TEST_CASE("config file precedence") {
  const auto cfg = scratch("analyze.cfg");
  {
    std::ofstream f(cfg);
    f << "# analysis defaults\nscheme = b92\ntheta=0.3926990817\ngamma = 0.3\n\nn=7\nformat=csv\n";
  }
  const auto from_file = run({"analyze", "--config", cfg.string()});
  REQUIRE(from_file.code == kExitOk);
  CHECK(from_file.out.find("b92,0.39269908170000001,0.29999999999999999,") != std::string::npos);

  const auto flag_wins = run({"analyze", "--config", cfg.string(), "--gamma", "0.2"});
  REQUIRE(flag_wins.code == kExitOk);
  CHECK(flag_wins.out == slurp(fs::path(QKD_GOLDEN_DIR) / "analyze_b92_theta0.3927_gamma0.2.csv"));

  const auto bad = scratch("bad.cfg");
  {
    std::ofstream f(bad);
    f << "gamma = 0.1\nsuite = all\n";
  }
  CHECK(run({"analyze", "--config", bad.string()}).code == kExitUsage);
  {
    std::ofstream f(bad);
    f << "gamma 0.1\n";
  }
  CHECK(run({"analyze", "--config", bad.string()}).code == kExitUsage);
  CHECK(run({"analyze", "--config", scratch("missing.cfg").string()}).code == kExitUsage);

  const auto sweep_cfg = scratch("sweep.cfg");
  {
    std::ofstream f(sweep_cfg);
    f << "var=gamma\nrange=0.01:0.1:5\n";
  }
  const auto s1 = run({"sweep", "--config", sweep_cfg.string()});
  const auto s2 = run({"sweep", "--var", "gamma", "--range", "0.01:0.1:5"});
  CHECK(s1.code == kExitOk);
  CHECK(s1.out == s2.out);
}

TEST_CASE("verify is deterministic for a seed") {
  const auto a = run({"verify", "--suite", "geometry", "--seed", "7"});
  const auto b = run({"verify", "--suite", "geometry", "--seed", "7"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.find("FAIL") == std::string::npos);
  const auto f = run({"verify", "--suite", "formulas"});
  CHECK(f.code == kExitOk);
  CHECK(f.out.find("all checks passed") != std::string::npos);
}

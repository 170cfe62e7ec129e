#include "qkdbound/verify.hpp"

#include "qkdbound/attack_lab.hpp"
#include "qkdbound/bloch_geometry.hpp"
#include "qkdbound/parity_info.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace qkdbound::verify {

namespace {

using attack::Scheme;
using qstate::BlochVector;
using qstate::Complex;
using qstate::Matrix;

constexpr std::array<double, 3> kThetas{std::numbers::pi / 12, std::numbers::pi / 8,
                                        std::numbers::pi / 6};
constexpr std::array<double, 4> kGammas{0.05, 0.1, 0.2, 0.4};

Check make_check(std::string name, double worst, double limit) {
  return {std::move(name), worst, limit, worst <= limit};
}

BlochVector random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  while (true) {
    const double x = normal(rng), y = normal(rng), z = normal(rng);
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1e-6) return {x / n, y / n, z / n};
  }
}

Matrix random_su2(std::mt19937_64& rng) {
  const auto q = random_direction(rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double t = angle(rng);
  const double c = std::cos(t / 2.0), s = std::sin(t / 2.0);
  Matrix u(2, 2);
  u << Complex(c, -s * q.z), Complex(-s * q.y, -s * q.x),
       Complex(s * q.y, -s * q.x), Complex(c, s * q.z);
  return u;
}

BlochVector conjugate(const Matrix& u, const BlochVector& r) {
  const auto rho = qstate::density_from_bloch(r);
  return qstate::bloch_from_density(qstate::DensityMatrix::from_trusted(u * rho.entries() * u.adjoint()));
}

double distance(const BlochVector& a, const BlochVector& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

void print_checks(const std::vector<Check>& checks, std::ostream& out) {
  char buf[256];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%s  %-44s worst=%.6e  limit=%.1e\n", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.worst, c.limit);
    out << buf;
  }
}

}  // namespace

std::vector<Check> formulas_suite() {
  double bob = 0.0, eve = 0.0, rate = 0.0, xz = 0.0, symmetry = 0.0;
  auto check_scheme = [&](const Scheme& scheme, double gamma) {
    for (int label : scheme.labels()) {
      bob = std::max(bob, qstate::max_abs_diff(attack::bob_reduced_state(scheme, label, gamma).entries(),
                                               attack::closed_form::bob_state(scheme, label, gamma)));
      const auto e = attack::eve_reduced_state(scheme, label, gamma);
      const Matrix weighted = e.weight * e.state.entries();
      eve = std::max(eve, qstate::max_abs_diff(weighted, attack::closed_form::eve_state(scheme, label, gamma)));
    }
    const auto r = attack::error_rate(scheme, gamma);
    rate = std::max(rate, std::abs(r.p_e - attack::closed_form::error_rate(scheme, gamma)));
    const auto a = attack::analyze({gamma, scheme}, 3);
    const auto expected = attack::closed_form::eve_xz(scheme, gamma);
    xz = std::max({xz, std::abs(a.x - expected[0]), std::abs(a.z - expected[1])});
    // Same error rate seen from the other label.
    const auto labels = scheme.labels();
    const auto other = qstate::DensityMatrix::pure(attack::joint_final_state(scheme, labels[1], gamma));
    const auto wrong = attack::wrong_outcome_state(scheme, labels[1]);
    const auto bob_other = qstate::partial_trace(other, attack::kEveBob, qstate::Subsystem::second);
    symmetry = std::max(symmetry, std::abs(qstate::fidelity_with_pure(bob_other, wrong) - r.p_e));
  };
  for (double gamma : kGammas) {
    check_scheme(Scheme::four_state(attack::Basis::x), gamma);
    check_scheme(Scheme::four_state(attack::Basis::y), gamma);
    for (double theta : kThetas) check_scheme(Scheme::two_state(theta), gamma);
  }
  double sweep = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double gamma = (std::numbers::pi / 2.0) * i / 51.0;
    const double s = std::sin(gamma / 2.0);
    sweep = std::max(sweep, std::abs(attack::error_rate(Scheme::four_state(), gamma).p_e - s * s));
  }
  return {make_check("bob reduced states vs closed form", bob, 1e-12),
          make_check("eve reduced states vs closed form", eve, 1e-12),
          make_check("error rates vs closed form", rate, 1e-12),
          make_check("eve canonical (x, z) vs closed form", xz, 1e-12),
          make_check("error rate label symmetry", symmetry, 1e-12),
          make_check("four-state p_e = sin^2(gamma/2), 50 points", sweep, 1e-12)};
}

std::vector<Check> geometry_suite(std::uint64_t seed, int pairs, int rotations) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double recon_cms = 0.0, recon_pole = 0.0, input_recon = 0.0, cms_angle = 0.0, pole_tan = 0.0;
  double purity = 0.0, invariance = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const double radius = 1.0 - unit(rng);  // (0, 1]
    const auto d0 = random_direction(rng);
    const auto d1 = random_direction(rng);
    const BlochVector r0{radius * d0.x, radius * d0.y, radius * d0.z};
    const BlochVector r1{radius * d1.x, radius * d1.y, radius * d1.z};
    const auto pair = geometry::canonicalize_pair(r0, r1);
    const auto cms = geometry::decompose_cms(pair);
    const auto pole = geometry::decompose_pole(pair);
    recon_cms = std::max(recon_cms, geometry::reconstruction_residual(pair, cms));
    recon_pole = std::max(recon_pole, geometry::reconstruction_residual(pair, pole));
    for (const auto* d : {&cms, &pole}) {
      auto mix = [&](const BlochVector& phi) {
        return geometry::to_input_frame(
            pair, {d->m * phi.x + (1 - d->m) * d->anchor.x, d->m * phi.y + (1 - d->m) * d->anchor.y,
                   d->m * phi.z + (1 - d->m) * d->anchor.z});
      };
      input_recon = std::max({input_recon, distance(mix(d->phi0), r0), distance(mix(d->phi1), r1)});
      purity = std::max({purity, std::abs(d->phi0.norm() - 1.0), std::abs(d->phi1.norm() - 1.0)});
    }
    cms_angle = std::max(cms_angle, std::abs(cms.beta - 0.5 * std::atan2(pair.x, pair.z)));
    if (pair.z >= 0.0) pole_tan = std::max(pole_tan, std::tan(pole.beta) - pair.x);
    if (i < rotations) {
      const Matrix u = random_su2(rng);
      const auto moved = geometry::canonicalize_pair(conjugate(u, r0), conjugate(u, r1));
      const auto mc = geometry::decompose_cms(moved);
      const auto mp = geometry::decompose_pole(moved);
      invariance = std::max({invariance, std::abs(moved.x - pair.x), std::abs(moved.z - pair.z),
                             std::abs(moved.radius - pair.radius), std::abs(mc.m - cms.m),
                             std::abs(mc.beta - cms.beta), std::abs(mp.m - pole.m),
                             std::abs(mp.beta - pole.beta)});
    }
  }
  return {make_check("cms reconstruction residual", recon_cms, 1e-10),
          make_check("pole reconstruction residual", recon_pole, 1e-10),
          make_check("reconstruction in input frame", input_recon, 1e-10),
          make_check("bounding states are pure", purity, 1e-10),
          make_check("cms beta = atan2(x, z) / 2", cms_angle, 0.0),
          make_check("pole tan(beta) - x for z >= 0", std::max(pole_tan, 0.0), 1e-12),
          make_check("frame invariance under shared unitaries", invariance, 1e-10)};
}

std::vector<Check> oracles_suite(std::uint64_t seed, std::ostream& table) {
  constexpr std::array<int, 3> kBits{2, 3, 4};
  constexpr std::array<double, 3> kAlphas{0.2, 0.1, 0.05};
  parity::SearchOptions options;
  options.seed = seed;
  double sandwich = 0.0;
  double monotone = 0.0;
  double final_dev = 0.0;
  char buf[256];
  table << "   n  alpha   helstrom           search             holevo             i_joint            "
           "search/i_joint\n";
  for (int n : kBits) {
    double prev = INFINITY;
    for (double alpha : kAlphas) {
      const auto r = parity::info_report(n, alpha, options);
      sandwich = std::max({sandwich, r.oracle_helstrom - r.oracle_search, r.oracle_search - r.oracle_holevo});
      const double ratio = r.oracle_search / r.i_joint;
      const double dev = std::abs(ratio - 1.0);
      monotone = std::max(monotone, dev - prev);
      prev = dev;
      if (alpha == kAlphas.back()) final_dev = std::max(final_dev, dev);
      std::snprintf(buf, sizeof buf, "%4d  %5.2f   %.12e  %.12e  %.12e  %.12e  %.9f\n", n, alpha,
                    r.oracle_helstrom, r.oracle_search, r.oracle_holevo, r.i_joint, ratio);
      table << buf;
    }
  }
  return {make_check("helstrom <= search <= holevo", std::max(sandwich, 0.0), 1e-9),
          make_check("|search/i_joint - 1| non-increasing", std::max(monotone, 0.0), 0.0),
          make_check("|search/i_joint - 1| at alpha = 0.05", final_dev, 0.15)};
}

bool is_suite_name(std::string_view name) {
  return name == "formulas" || name == "oracles" || name == "geometry" || name == "all";
}

bool run(std::string_view suite, std::uint64_t seed, std::ostream& out) {
  if (!is_suite_name(suite)) throw std::invalid_argument("unknown suite");
  const bool all = suite == "all";
  std::vector<Check> checks;
  if (all || suite == "formulas") {
    out << "[formulas]\n";
    auto c = formulas_suite();
    print_checks(c, out);
    checks.insert(checks.end(), c.begin(), c.end());
  }
  if (all || suite == "geometry") {
    out << "[geometry]\n";
    auto c = geometry_suite(seed);
    print_checks(c, out);
    checks.insert(checks.end(), c.begin(), c.end());
  }
  if (all || suite == "oracles") {
    out << "[oracles]\n";
    auto c = oracles_suite(seed, out);
    print_checks(c, out);
    checks.insert(checks.end(), c.begin(), c.end());
  }
  const auto failed = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; });
  out << (failed == 0 ? "all checks passed" : "some checks FAILED") << " (" << checks.size() - failed << "/"
      << checks.size() << ")\n";
  return failed == 0;
}

}  // namespace qkdbound::verify

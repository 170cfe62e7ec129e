#include "oracles.hpp"
#include "qkdbound/bloch_geometry.hpp"
#include "qkdbound/parity_info.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qkdbound;
using geometry::CanonicalPair;
using qstate::BlochVector;

namespace {

BlochVector scaled(const BlochVector& d, double r) { return {r * d.x, r * d.y, r * d.z}; }

BlochVector random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double x = g(rng), y = g(rng), z = g(rng);
  const double n = std::sqrt(x * x + y * y + z * z);
  return {x / n, y / n, z / n};
}

double dist(const BlochVector& a, const BlochVector& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

BlochVector mix(const geometry::DecompositionResult& d, const BlochVector& phi) {
  return {d.m * phi.x + (1 - d.m) * d.anchor.x, d.m * phi.y + (1 - d.m) * d.anchor.y,
          d.m * phi.z + (1 - d.m) * d.anchor.z};
}

CanonicalPair canonical(double x, double z) {
  return geometry::canonicalize_pair(BlochVector{x, 0, z}, BlochVector{-x, 0, z});
}

}  // namespace

TEST_CASE("canonical pair examples") {
  const auto up = geometry::canonicalize_pair(BlochVector{0, 0, 1}, BlochVector{0, 0, 1});
  CHECK(up.x == doctest::Approx(0.0));
  CHECK(up.z == doctest::Approx(1.0));

  const double a = 0.13;
  const auto kets = geometry::canonicalize_pair(
      qstate::DensityMatrix(oracle::projector(oracle::ket({std::cos(a), std::sin(a)}))),
      qstate::DensityMatrix(oracle::projector(oracle::ket({std::cos(a), -std::sin(a)}))));
  CHECK(kets.x == doctest::Approx(std::sin(2 * a)).epsilon(1e-12));
  CHECK(kets.z == doctest::Approx(std::cos(2 * a)).epsilon(1e-12));
  CHECK(kets.radius == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("canonical pair errors") {
  CHECK_THROWS_AS(geometry::canonicalize_pair(BlochVector{0.5, 0, 0}, BlochVector{0, 0.6, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(geometry::canonicalize_pair(BlochVector{}, BlochVector{}), std::domain_error);
  CHECK_THROWS_AS(geometry::canonicalize_pair(BlochVector{1.1, 0, 0}, BlochVector{1.1, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(geometry::decompose_cms(CanonicalPair{}), std::domain_error);
  CHECK_THROWS_AS(geometry::decompose_pole(CanonicalPair{0.0, -1.0, 1.0}), std::domain_error);
}

TEST_CASE("canonical frame invariants on random pairs") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double r = 1.0 - u(rng);
    const auto r0 = scaled(random_direction(rng), r);
    const auto r1 = scaled(random_direction(rng), r);
    const auto p = geometry::canonicalize_pair(r0, r1);
    CHECK(std::abs(p.x * p.x + p.z * p.z - p.radius * p.radius) <= 1e-10);
    CHECK(p.x >= 0.0);
    CHECK(p.z >= 0.0);
    CHECK((p.frame * p.frame.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(std::abs(p.frame.determinant() - 1.0) <= 1e-10);
    const Eigen::Vector3d c0 = p.frame * Eigen::Vector3d(r0.x, r0.y, r0.z);
    const Eigen::Vector3d c1 = p.frame * Eigen::Vector3d(r1.x, r1.y, r1.z);
    CHECK((c0 - Eigen::Vector3d(p.x, 0, p.z)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((c1 - Eigen::Vector3d(-p.x, 0, p.z)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(p.x == doctest::Approx(dist(r0, r1) / 2).epsilon(1e-12));
  }
}

TEST_CASE("degenerate frames") {
  // Coincident states: the x axis is arbitrary, everything downstream is not.
  const auto same = geometry::canonicalize_pair(BlochVector{0.2, -0.3, 0.4}, BlochVector{0.2, -0.3, 0.4});
  CHECK(same.x == doctest::Approx(0.0));
  CHECK(geometry::decompose_cms(same).beta == 0.0);
  CHECK(geometry::decompose_pole(same).beta == doctest::Approx(0.0));
  CHECK(geometry::reconstruction_residual(same, geometry::decompose_pole(same)) <= 1e-10);

  // Antipodal states: z = 0 and the symmetry axis is arbitrary.
  const auto anti = geometry::canonicalize_pair(BlochVector{0, 0.7, 0}, BlochVector{0, -0.7, 0});
  CHECK(anti.x == doctest::Approx(0.7));
  CHECK(anti.z == doctest::Approx(0.0));
  CHECK(geometry::decompose_cms(anti).beta == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("completely mixed anchor") {
  const auto pure = canonical(std::sin(0.4), std::cos(0.4));
  const auto d = geometry::decompose_cms(pure);
  CHECK(d.m == doctest::Approx(1.0));
  CHECK(dist(d.phi0, pure.first()) <= 1e-12);
  CHECK(dist(d.phi1, pure.second()) <= 1e-12);

  for (double r : {0.1, 0.5, 0.93}) {
    const double a = 0.21;
    const auto d2 = geometry::decompose_cms(canonical(r * std::sin(2 * a), r * std::cos(2 * a)));
    CHECK(d2.beta == doctest::Approx(a).epsilon(1e-13));
    CHECK(d2.m == doctest::Approx(r).epsilon(1e-13));
    CHECK(d2.anchor == BlochVector{});
  }

  // Eve's four-state pair at gamma = 0.2.
  const double g = 0.2;
  const double x = std::sin(g), z = std::cos(g) * std::cos(g);
  const auto bb = geometry::decompose_cms(canonical(x, z));
  CHECK(bb.beta == doctest::Approx(0.5 * std::atan(x / z)).epsilon(1e-14));
  CHECK(bb.beta == doctest::Approx(0.10197848123224777).epsilon(1e-13));
}

TEST_CASE("spin-down anchor") {
  const auto col = geometry::decompose_pole(canonical(0.0, 0.3));
  CHECK(dist(col.phi0, BlochVector{0, 0, 1}) <= 1e-12);
  CHECK(col.beta == 0.0);

  const auto pure = canonical(std::sin(0.4), std::cos(0.4));
  const auto d = geometry::decompose_pole(pure);
  CHECK(d.m == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist(d.phi0, pure.first()) <= 1e-12);
  CHECK(d.beta == doctest::Approx(geometry::decompose_cms(pure).beta).epsilon(1e-10));

  const auto p = canonical(0.1, 0.9);
  const auto e = geometry::decompose_pole(p);
  CHECK(e.beta == doctest::Approx(std::atan(0.1 / 1.9)).epsilon(1e-14));
  CHECK(std::tan(e.beta) <= 0.1);
  CHECK(dist(mix(e, e.phi0), BlochVector{0.1, 0, 0.9}) <= 1e-12);
  CHECK(dist(mix(e, e.phi1), BlochVector{-0.1, 0, 0.9}) <= 1e-12);
  CHECK(e.anchor == BlochVector{0, 0, -1});
}

TEST_CASE("decompositions on random pairs") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double r = 1.0 - u(rng);
    const auto r0 = scaled(random_direction(rng), r);
    const auto r1 = scaled(random_direction(rng), r);
    const auto pair = geometry::canonicalize_pair(r0, r1);
    for (const auto& d : {geometry::decompose_cms(pair), geometry::decompose_pole(pair)}) {
      CHECK(geometry::reconstruction_residual(pair, d) <= 1e-10);
      CHECK(std::abs(d.phi0.norm() - 1.0) <= 1e-10);
      CHECK(std::abs(d.phi1.norm() - 1.0) <= 1e-10);
      CHECK(d.m >= 0.0);
      CHECK(d.m <= 1.0 + 1e-12);
      CHECK(d.beta >= 0.0);
      CHECK(d.beta <= std::numbers::pi / 4 + 1e-15);
      CHECK(dist(geometry::to_input_frame(pair, mix(d, d.phi0)), r0) <= 1e-10);
      CHECK(dist(geometry::to_input_frame(pair, mix(d, d.phi1)), r1) <= 1e-10);
    }
    CHECK(std::tan(geometry::decompose_pole(pair).beta) <= pair.x + 1e-12);
  }
}

TEST_CASE("the bound evaluated on the bounding angle") {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double a = 0.7 * u(rng);
    const double r = 0.05 + 0.95 * u(rng);
    const auto pair = canonical(r * std::sin(2 * a), r * std::cos(2 * a));
    const double alpha_mixed = 0.5 * std::atan(pair.x / pair.z);
    for (int n : {3, 7}) {
      CHECK(parity::bm_bound(n, geometry::decompose_cms(pair).beta) ==
            doctest::Approx(parity::bm_bound(n, alpha_mixed)).epsilon(1e-12));
      const double pole = parity::bm_bound(n, geometry::decompose_pole(pair).beta);
      CHECK(std::isfinite(pole));
      CHECK(pole > 0.0);
    }
  }
}

TEST_CASE("ket half angle") {
  CHECK(geometry::ket_half_angle(0.0, 1.0) == 0.0);
  CHECK(geometry::ket_half_angle(1.0, 0.0) == doctest::Approx(std::numbers::pi / 4));
  CHECK(geometry::ket_half_angle(std::sin(0.6), std::cos(0.6)) == doctest::Approx(0.3).epsilon(1e-14));
}

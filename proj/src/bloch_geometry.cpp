#include "qkdbound/bloch_geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdbound::geometry {

namespace {

constexpr double kDegenerate = 1e-14;

Eigen::Vector3d as_eigen(const BlochVector& r) { return {r.x, r.y, r.z}; }
BlochVector as_bloch(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

Eigen::Vector3d any_orthogonal(const Eigen::Vector3d& v) {
  Eigen::Index axis = 0;
  v.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e(axis) = 1.0;
  return v.cross(e).normalized();
}

double distance(const BlochVector& a, const BlochVector& b) {
  return (as_eigen(a) - as_eigen(b)).norm();
}

void check_pair(const CanonicalPair& pair) {
  if (!(pair.x >= 0.0) || !std::isfinite(pair.z) || !std::isfinite(pair.radius)) {
    throw std::invalid_argument("canonical pair: x must be nonnegative and all fields finite");
  }
  if (pair.x * pair.x + pair.z * pair.z > 1.0 + kGeometryTol) {
    throw std::invalid_argument("canonical pair lies outside the Bloch ball");
  }
}

}  // namespace

double ket_half_angle(double x, double z) { return 0.5 * std::atan2(x, z); }

CanonicalPair canonicalize_pair(const BlochVector& r0, const BlochVector& r1) {
  const Eigen::Vector3d a = as_eigen(r0);
  const Eigen::Vector3d b = as_eigen(r1);
  const double ra = a.norm();
  const double rb = b.norm();
  if (ra > 1.0 + qstate::kAlgebraTol || rb > 1.0 + qstate::kAlgebraTol) {
    throw std::invalid_argument("canonicalize_pair: Bloch vector outside the unit ball");
  }
  if (std::abs(ra - rb) > kRadiusTol) {
    throw std::invalid_argument("canonicalize_pair: Bloch radii differ (attack is not symmetric)");
  }
  const Eigen::Vector3d sum = a + b;
  const Eigen::Vector3d diff = a - b;
  const double ns = sum.norm();
  const double nd = diff.norm();
  if (ns <= kDegenerate && nd <= kDegenerate) {
    throw std::domain_error("canonicalize_pair: both states are completely mixed; no frame");
  }

  Eigen::Vector3d ez;
  Eigen::Vector3d ex;
  if (ns > kDegenerate) {
    ez = sum / ns;
    const Eigen::Vector3d perp = diff - diff.dot(ez) * ez;
    ex = perp.norm() > kDegenerate ? Eigen::Vector3d(perp.normalized()) : any_orthogonal(ez);
  } else {
    // Antipodal pair: the symmetry axis is any direction orthogonal to the difference.
    ex = diff / nd;
    ez = any_orthogonal(ex);
  }
  const Eigen::Vector3d ey = ez.cross(ex);

  CanonicalPair out;
  out.x = 0.5 * nd;
  out.z = 0.5 * ns;
  out.radius = 0.5 * (ra + rb);
  out.frame.row(0) = ex.transpose();
  out.frame.row(1) = ey.transpose();
  out.frame.row(2) = ez.transpose();
  return out;
}

CanonicalPair canonicalize_pair(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  return canonicalize_pair(qstate::bloch_from_density(rho0), qstate::bloch_from_density(rho1));
}

DecompositionResult decompose_cms(const CanonicalPair& pair) {
  check_pair(pair);
  if (!(pair.radius > 0.0)) {
    throw std::domain_error("decompose_cms: zero radius has no direction");
  }
  DecompositionResult d;
  d.m = pair.radius;
  d.phi0 = {pair.x / pair.radius, 0.0, pair.z / pair.radius};
  d.phi1 = {-pair.x / pair.radius, 0.0, pair.z / pair.radius};
  d.anchor = {0.0, 0.0, 0.0};
  d.beta = ket_half_angle(pair.x, pair.z);
  return d;
}

DecompositionResult decompose_pole(const CanonicalPair& pair) {
  check_pair(pair);
  const double lift = pair.z + 1.0;
  if (!(lift > kDegenerate)) {
    throw std::domain_error("decompose_pole: input coincides with the spin-down anchor");
  }
  // The ray a + t u from a = (0,0,-1) meets the sphere at t = 2 u_z, so
  // m = |p - a| / |phi - a| = L^2 / (2 (z + 1)) with L = |p - a|.
  const double len2 = pair.x * pair.x + lift * lift;
  const double m = len2 / (2.0 * lift);
  DecompositionResult d;
  d.m = m;
  d.phi0 = {pair.x / m, 0.0, -1.0 + lift / m};
  d.phi1 = {-pair.x / m, 0.0, -1.0 + lift / m};
  d.anchor = {0.0, 0.0, -1.0};
  // Inscribed angle at the south pole is half the central angle of phi_p.
  d.beta = std::atan(pair.x / lift);
  return d;
}

BlochVector to_input_frame(const CanonicalPair& pair, const BlochVector& canonical) {
  return as_bloch(pair.frame.transpose() * as_eigen(canonical));
}

double reconstruction_residual(const CanonicalPair& pair, const DecompositionResult& d) {
  auto mix = [&](const BlochVector& phi) {
    return BlochVector{d.m * phi.x + (1.0 - d.m) * d.anchor.x,
                       d.m * phi.y + (1.0 - d.m) * d.anchor.y,
                       d.m * phi.z + (1.0 - d.m) * d.anchor.z};
  };
  return std::max(distance(mix(d.phi0), pair.first()), distance(mix(d.phi1), pair.second()));
}

}  // namespace qkdbound::geometry

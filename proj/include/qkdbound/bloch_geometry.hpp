// Bounding a pair of equal-radius qubit mixed states by a pair of pure states.
//
// Each input state is written as rho_p = m Phi_p + (1 - m) chi, with Phi_p
// pure and chi a common anchor. Any distinguishability measure that cannot
// increase under mixing rates the pure pair at least as distinguishable as
// the mixed pair, so a bound known for pure states at ket half-angle beta
// also bounds the mixed pair.
//
// Note: two qubit states with equal Bloch radius |r| have equal determinant
// (1 - |r|^2) / 4. Pairs are matched on the radius.

#pragma once

#include "qkdbound/qstate.hpp"

#include <Eigen/Dense>

namespace qkdbound::geometry {

using qstate::BlochVector;
using qstate::DensityMatrix;

inline constexpr double kRadiusTol = 1e-9;
inline constexpr double kGeometryTol = 1e-10;

/// Pair mapped into the frame where the states read (+x, 0, z) and (-x, 0, z).
struct CanonicalPair {
  double x = 0.0;       // half the Bloch distance, >= 0
  double z = 0.0;       // common coordinate along the symmetry axis, >= 0
  double radius = 0.0;  // common Bloch radius
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();  // rows: x, y, z axes

  BlochVector first() const { return {x, 0.0, z}; }
  BlochVector second() const { return {-x, 0.0, z}; }
};

struct DecompositionResult {
  double m = 0.0;
  BlochVector phi0;
  BlochVector phi1;
  BlochVector anchor;
  double beta = 0.0;  // ket half-angle: bounding kets (cos beta, +-sin beta)
};

/// Throws std::invalid_argument for non-qubit or unnormalized inputs or
/// unequal radii, std::domain_error when both inputs are the completely
/// mixed state (no frame is defined).
CanonicalPair canonicalize_pair(const DensityMatrix& rho0, const DensityMatrix& rho1);
CanonicalPair canonicalize_pair(const BlochVector& r0, const BlochVector& r1);

/// Case (a): anchor is the completely mixed state, m equals the radius.
DecompositionResult decompose_cms(const CanonicalPair& pair);

/// Case (b): anchor is spin-down along z; Phi_p are where the rays from the
/// south pole through the inputs leave the sphere.
DecompositionResult decompose_pole(const CanonicalPair& pair);

/// Angle from a Bloch-plane opening angle: the kets of pure states at Bloch
/// polar angle 2*beta are (cos beta, +-sin beta).
double ket_half_angle(double x, double z);

/// Maps a canonical-frame Bloch vector back to the frame of the inputs.
BlochVector to_input_frame(const CanonicalPair& pair, const BlochVector& canonical);

/// max over p of |m phi_p + (1 - m) anchor - canonical input p|.
double reconstruction_residual(const CanonicalPair& pair, const DecompositionResult& d);

}  // namespace qkdbound::geometry

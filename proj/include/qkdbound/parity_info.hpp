// Information on the parity bit of an n-bit string of non-orthogonal qubits.
//
// Closed forms (separate measurement, joint measurement, Hamming-code bound)
// plus brute-force oracles used to check them on small strings. All results
// are in bits; the natural-log factors of the closed forms are kept as
// written in their original derivations.

#pragma once

#include "qkdbound/qstate.hpp"

#include <cstdint>

namespace qkdbound::parity {

using qstate::DensityMatrix;

inline constexpr int kMaxEnsembleBits = 10;

/// Optimal parity information when each bit is measured on its own:
/// (2 alpha)^(2n) / (2 ln 2). alpha in [0, pi/4), n >= 1.
double i_separate(int n, double alpha);

/// Optimal parity information for a joint measurement: c C(2k,k) alpha^(2k)
/// with n = 2k, c = 1 for even n and n = 2k - 1, c = 1/ln 2 for odd n.
double i_joint(int n, double alpha);

/// C(n) = 2 sqrt(n + 1) / (ln 2 sqrt(pi)).
double hamming_prefactor(int n);

/// Information bound with parities of substrings revealed (Hamming codes):
/// C(n) (2 beta)^((n+1)/2). beta in [0, pi/4).
double bm_bound(int n, double beta);

/// The same bound written in the error rate, C(n) (4 p_e)^((n+1)/4).
double bm_bound_from_error_rate(int n, double p_e);

/// Probe half-angle left by the weak translucent attack on the two-state
/// scheme: (tan^2(2 theta) p_e)^(1/4). theta in (0, pi/4), p_e in [0, 1).
double ehpp_angle(double theta, double p_e);

struct ParityEnsemble {
  int n = 0;
  double alpha = 0.0;
  DensityMatrix rho_even;
  DensityMatrix rho_odd;
};

/// Uniform mixtures over even- and odd-parity strings of kets
/// (cos alpha, +-sin alpha). n in [1, 10].
ParityEnsemble build_parity_ensemble(int n, double alpha);

/// Mutual information between the label and the two-outcome measurement on
/// the nonnegative / negative eigenspaces of p rho0 - (1 - p) rho1.
double helstrom_information(const DensityMatrix& rho0, const DensityMatrix& rho1, double prior0);

/// S(p rho0 + (1-p) rho1) - p S(rho0) - (1-p) S(rho1).
double holevo_bound(const DensityMatrix& rho0, const DensityMatrix& rho1, double prior0);

/// Mutual information of a complete orthonormal-basis measurement; the
/// columns of `basis` are the measurement vectors.
double basis_information(const DensityMatrix& rho0, const DensityMatrix& rho1, double prior0,
                         const qstate::Matrix& basis);

struct SearchOptions {
  std::uint64_t seed = 42;
  int random_starts = 2;
  int max_sweeps = 60;
};

/// Best label/outcome mutual information over orthonormal-basis measurements.
///
/// Starts from the Helstrom eigenbasis, the eigenbases of both states and
/// `random_starts` Haar-random bases, and refines each by coordinate ascent
/// over pairwise Givens rotations. Deterministic for a given seed; never
/// below helstrom_information.
double accessible_info_search(const DensityMatrix& rho0, const DensityMatrix& rho1, double prior0,
                              const SearchOptions& options = {});

struct InfoReport {
  double i_separate = 0.0;
  double i_joint = 0.0;
  double bm_bound = 0.0;
  double oracle_helstrom = 0.0;
  double oracle_search = 0.0;
  double oracle_holevo = 0.0;
};

/// Formula values and all three oracles on the parity ensemble at (n, alpha),
/// equal priors.
InfoReport info_report(int n, double alpha, const SearchOptions& options = {});

}  // namespace qkdbound::parity

// Symmetric collective attack with a two-dimensional probe on the two-state
// (B92) and four-state (BB84) schemes.
//
// Eve's probe starts in (1, 0) and interacts with each transmitted qubit
// through a rotation by gamma between |0>_E|1>_B and |1>_E|0>_B. Joint states
// are ordered Eve (x) Bob; only this ordering puts the rotation block in the
// middle of the 4x4 interaction matrix.

#pragma once

#include "qkdbound/bloch_geometry.hpp"
#include "qkdbound/qstate.hpp"

#include <array>
#include <optional>

namespace qkdbound::attack {

using qstate::DensityMatrix;
using qstate::Matrix;
using qstate::StateVector;

inline constexpr qstate::Bipartition kEveBob{2, 2};

enum class SchemeKind { two_state, four_state };
enum class Basis { x, y };

class Scheme {
 public:
  /// Alice sends (cos theta, +-sin theta); theta in (0, pi/4).
  static Scheme two_state(double theta);
  /// Alice sends (1, i^m)/sqrt(2); the analysis runs on one basis pair,
  /// m in {0, 2} for x and m in {1, 3} for y.
  static Scheme four_state(Basis basis = Basis::x);

  SchemeKind kind() const { return kind_; }
  double theta() const { return theta_; }
  Basis basis() const { return basis_; }

  /// The two labels whose states Eve must tell apart.
  std::array<int, 2> labels() const;

 private:
  Scheme(SchemeKind kind, double theta, Basis basis) : kind_(kind), theta_(theta), basis_(basis) {}

  SchemeKind kind_;
  double theta_;
  Basis basis_;
};

struct AttackParams {
  double gamma = 0.0;  // [0, pi/2)
  Scheme scheme = Scheme::four_state();
};

/// Identity except for the rotation block on indices 1, 2.
Matrix probe_unitary(double gamma);

/// Alice's ket for a label: bit 0/1 (two-state) or m in 0..3 (four-state).
StateVector alice_state(const Scheme& scheme, int label);

/// Bob's outcome that signals an error when `label` was sent: phi_p' for the
/// two-state scheme, the opposite state of the same basis for four-state.
StateVector wrong_outcome_state(const Scheme& scheme, int label);

/// probe_unitary(gamma) applied to (1,0) (x) alice_state.
StateVector joint_final_state(const Scheme& scheme, int label, double gamma);

DensityMatrix bob_reduced_state(const Scheme& scheme, int label, double gamma);

struct ErrorRate {
  double p_e = 0.0;
  /// Two-state only: wrong conclusive / all conclusive results.
  std::optional<double> p_e_conditional;
};

ErrorRate error_rate(const Scheme& scheme, double gamma);

/// Conditioning operator on Bob's side for Eve's information-dependent state:
/// identity for four-state (the basis is announced), and
/// 1/2 |phi_0'><phi_0'| + 1/2 |phi_1'><phi_1'| for two-state (only conclusive
/// results are kept, each measurement chosen with probability 1/2).
qstate::PositiveOperator eve_condition(const Scheme& scheme);

struct EveState {
  DensityMatrix state;  // normalized
  double weight = 1.0;  // trace before normalization
};

EveState eve_reduced_state(const Scheme& scheme, int label, double gamma);

struct AttackAnalysis {
  Scheme scheme = Scheme::four_state();
  double gamma = 0.0;
  int n = 1;
  double p_e = 0.0;
  std::optional<double> p_e_conditional;
  std::array<DensityMatrix, 2> bob_states;
  std::array<DensityMatrix, 2> eve_states;
  std::array<double, 2> eve_weights{};
  geometry::CanonicalPair pair;
  double x = 0.0;
  double z = 0.0;
  double beta = 0.0;       // completely-mixed anchor
  double beta_pole = 0.0;  // spin-down anchor
  double bound_bits = 0.0;
  /// Four-state only: C(n) (4 p_e)^((n+1)/4).
  std::optional<double> error_rate_bound_bits;

  double bound(int bits) const;
};

AttackAnalysis analyze(const AttackParams& params, int n);

/// Largest error rate reachable for gamma in [0, pi/2).
double max_error_rate(const Scheme& scheme);

/// Bisection on gamma in [0, pi/2) so that error_rate(gamma).p_e = target.
/// Throws std::invalid_argument if the target is unattainable.
double gamma_for_error_rate(const Scheme& scheme, double p_e_target);

/// Closed forms of the attack's matrices and rates, written directly from
/// the trigonometric expressions rather than from the state pipeline.
namespace closed_form {
Matrix bob_state(const Scheme& scheme, int label, double gamma);
/// Two-state: unnormalized conditioned matrix. Four-state: normalized.
Matrix eve_state(const Scheme& scheme, int label, double gamma);
double error_rate(const Scheme& scheme, double gamma);
/// Canonical (x, z) of Eve's normalized pair.
std::array<double, 2> eve_xz(const Scheme& scheme, double gamma);
}  // namespace closed_form

}  // namespace qkdbound::attack

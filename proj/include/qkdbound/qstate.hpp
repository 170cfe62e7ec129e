// Small dense complex linear algebra for pure and mixed quantum states.
//
// Composite systems are ordered with the first tensor factor as the most
// significant index: a basis state |a>|b> of a d_A x d_B system lives at
// index a * d_B + b.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace qkdbound::qstate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kSpectralTol = 1e-10;

/// Unit-norm pure state.
class StateVector {
 public:
  /// Throws std::invalid_argument unless the squared norm is 1 within 1e-12.
  explicit StateVector(Vector amplitudes);

  /// Rescales a nonzero vector to unit norm.
  static StateVector normalize(const Vector& v);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  Vector amps_;
};

/// Hermitian positive-semidefinite operator with trace in (0, 1].
///
/// The trace is the state's weight. Weighted (sub-normalized) states carry
/// the probability of a conditioning event; normalized() divides it out.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and positivity (spectral check).
  explicit DensityMatrix(const Matrix& entries);

  /// Skips the spectral positivity check. Only for results that are
  /// positive by construction (mixtures, partial traces, tensor products).
  /// Hermiticity and trace are still checked.
  static DensityMatrix from_trusted(const Matrix& entries);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  double weight() const { return weight_; }
  bool is_normalized() const;
  const Matrix& entries() const { return rho_; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  DensityMatrix normalized() const;

  /// Hermitian, PSD within 1e-12, trace matches weight.
  bool satisfies_invariants() const;

 private:
  struct Trusted {};
  DensityMatrix(const Matrix& entries, Trusted);

  Matrix rho_;
  double weight_ = 1.0;
};

/// Hermitian positive-semidefinite operator with no trace constraint.
class PositiveOperator {
 public:
  explicit PositiveOperator(const Matrix& entries);

  static PositiveOperator identity(std::size_t dim);
  static PositiveOperator projector(const StateVector& psi);

  std::size_t dim() const { return static_cast<std::size_t>(op_.rows()); }
  const Matrix& entries() const { return op_; }

 private:
  Matrix op_;
};

/// Real 3-vector of the Pauli expansion rho = (I + r.sigma) / 2.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

/// Factor dimensions of a bipartite space, first factor most significant.
struct Bipartition {
  std::size_t first = 0;
  std::size_t second = 0;
};

enum class Subsystem { first, second };

StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state of `keep`; the weight is preserved.
DensityMatrix partial_trace(const DensityMatrix& rho, Bipartition dims, Subsystem keep);

/// Information-dependent reduced state Tr_traced[rho (condition on traced)].
///
/// `condition` acts on the subsystem that is traced out. The result is
/// weighted by the probability of the condition; with the identity it equals
/// partial_trace. Throws std::domain_error if the condition has zero
/// probability, std::invalid_argument on dimension mismatch or if the
/// resulting weight exceeds one.
DensityMatrix conditioned_reduced_state(const DensityMatrix& rho, Bipartition dims,
                                        Subsystem keep, const PositiveOperator& condition);

BlochVector bloch_from_density(const DensityMatrix& rho);
DensityMatrix density_from_bloch(const BlochVector& r);

/// det rho = (1 - |r|^2) / 4 for a normalized qubit state.
double qubit_determinant(const DensityMatrix& rho);

struct EigenSystem {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
};

/// Throws std::invalid_argument if H is not Hermitian within 1e-12.
EigenSystem hermitian_eigensystem(const Matrix& h);

/// Binary entropy in bits, h(0) = h(1) = 0.
double binary_entropy(double p);

/// Von Neumann entropy in bits of a normalized state.
double von_neumann_entropy(const DensityMatrix& rho);

/// Throws std::invalid_argument unless U^dagger U = I within 1e-12.
StateVector apply_unitary(const Matrix& u, const StateVector& psi);

/// |<psi| rho |psi>| for normalized rho.
double fidelity_with_pure(const DensityMatrix& rho, const StateVector& psi);

/// Largest absolute entry of a - b.
double max_abs_diff(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tol = kAlgebraTol);
bool is_unitary(const Matrix& m, double tol = kAlgebraTol);

}  // namespace qkdbound::qstate

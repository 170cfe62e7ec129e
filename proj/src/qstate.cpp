#include "qkdbound/qstate.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qkdbound::qstate {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and nonempty");
  }
}

double min_eigenvalue(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue solver failed to converge");
  }
  return solver.eigenvalues().minCoeff();
}

Matrix hermitize(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

// StateVector

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) {
    throw std::invalid_argument("StateVector: empty amplitude vector");
  }
  if (std::abs(amps_.squaredNorm() - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("StateVector: squared norm differs from 1");
  }
}

StateVector StateVector::normalize(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0)) {
    throw std::invalid_argument("StateVector::normalize: zero vector");
  }
  return StateVector(v / n);
}

// DensityMatrix

DensityMatrix::DensityMatrix(const Matrix& entries, Trusted) {
  require_square(entries, "DensityMatrix");
  if (!is_hermitian(entries)) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  const Complex tr = entries.trace();
  if (std::abs(tr.imag()) > kAlgebraTol) {
    throw std::invalid_argument("DensityMatrix: trace has an imaginary part");
  }
  if (!(tr.real() > 0.0) || tr.real() > 1.0 + kAlgebraTol) {
    throw std::invalid_argument("DensityMatrix: trace must lie in (0, 1]");
  }
  rho_ = hermitize(entries);
  weight_ = rho_.trace().real();
}

DensityMatrix::DensityMatrix(const Matrix& entries) : DensityMatrix(entries, Trusted{}) {
  if (min_eigenvalue(rho_) < -kAlgebraTol) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_trusted(const Matrix& entries) {
  return DensityMatrix(entries, Trusted{});
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const Vector& v = psi.amplitudes();
  return from_trusted(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("maximally_mixed: zero dimension");
  return from_trusted(Matrix::Identity(idx(dim), idx(dim)) / static_cast<double>(dim));
}

bool DensityMatrix::is_normalized() const { return std::abs(weight_ - 1.0) <= kAlgebraTol; }

DensityMatrix DensityMatrix::normalized() const { return from_trusted(rho_ / weight_); }

bool DensityMatrix::satisfies_invariants() const {
  return is_hermitian(rho_) && min_eigenvalue(rho_) >= -kAlgebraTol &&
         std::abs(rho_.trace().real() - weight_) <= kAlgebraTol;
}

// PositiveOperator

PositiveOperator::PositiveOperator(const Matrix& entries) {
  require_square(entries, "PositiveOperator");
  if (!is_hermitian(entries)) {
    throw std::invalid_argument("PositiveOperator: not Hermitian");
  }
  op_ = hermitize(entries);
  if (min_eigenvalue(op_) < -kAlgebraTol) {
    throw std::invalid_argument("PositiveOperator: not positive semidefinite");
  }
}

PositiveOperator PositiveOperator::identity(std::size_t dim) {
  return PositiveOperator(Matrix::Identity(idx(dim), idx(dim)));
}

PositiveOperator PositiveOperator::projector(const StateVector& psi) {
  const Vector& v = psi.amplitudes();
  return PositiveOperator(v * v.adjoint());
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

// Composite systems

StateVector tensor(const StateVector& a, const StateVector& b) {
  Vector out = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  return StateVector(std::move(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Matrix out = Eigen::kroneckerProduct(a.entries(), b.entries()).eval();
  return DensityMatrix::from_trusted(out);
}

namespace {

void check_bipartition(const DensityMatrix& rho, Bipartition dims) {
  if (dims.first == 0 || dims.second == 0 || dims.first * dims.second != rho.dim()) {
    throw std::invalid_argument("partial trace: factor dimensions do not match the state");
  }
}

// out(i, i') = sum_{t, t'} rho(i t, i' t') * op(t', t), with the kept index i
// and traced index t placed according to `keep`.
Matrix contract_traced(const Matrix& rho, Bipartition dims, Subsystem keep, const Matrix* op) {
  const std::size_t dk = keep == Subsystem::first ? dims.first : dims.second;
  const std::size_t dt = keep == Subsystem::first ? dims.second : dims.first;
  auto flat = [&](std::size_t kept, std::size_t traced) {
    return keep == Subsystem::first ? idx(kept * dims.second + traced)
                                    : idx(traced * dims.second + kept);
  };
  Matrix out = Matrix::Zero(idx(dk), idx(dk));
  for (std::size_t i = 0; i < dk; ++i) {
    for (std::size_t j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      if (op == nullptr) {
        for (std::size_t t = 0; t < dt; ++t) acc += rho(flat(i, t), flat(j, t));
      } else {
        for (std::size_t t = 0; t < dt; ++t) {
          for (std::size_t u = 0; u < dt; ++u) {
            acc += rho(flat(i, t), flat(j, u)) * (*op)(idx(u), idx(t));
          }
        }
      }
      out(idx(i), idx(j)) = acc;
    }
  }
  return out;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, Bipartition dims, Subsystem keep) {
  check_bipartition(rho, dims);
  return DensityMatrix::from_trusted(contract_traced(rho.entries(), dims, keep, nullptr));
}

DensityMatrix conditioned_reduced_state(const DensityMatrix& rho, Bipartition dims,
                                        Subsystem keep, const PositiveOperator& condition) {
  check_bipartition(rho, dims);
  const std::size_t dt = keep == Subsystem::first ? dims.second : dims.first;
  if (condition.dim() != dt) {
    throw std::invalid_argument("conditioned_reduced_state: operator must act on the traced subsystem");
  }
  Matrix out = contract_traced(rho.entries(), dims, keep, &condition.entries());
  const double w = out.trace().real();
  if (!(w > 0.0)) {
    throw std::domain_error("conditioned_reduced_state: condition has zero probability");
  }
  return DensityMatrix::from_trusted(out);
}

// Bloch representation

BlochVector bloch_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("bloch_from_density: qubit state required");
  if (!rho.is_normalized()) throw std::invalid_argument("bloch_from_density: state must be normalized");
  const Complex off = rho(1, 0);
  return {2.0 * off.real(), 2.0 * off.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

DensityMatrix density_from_bloch(const BlochVector& r) {
  if (r.norm() > 1.0 + kAlgebraTol) {
    throw std::invalid_argument("density_from_bloch: |r| exceeds 1");
  }
  Matrix m(2, 2);
  m << Complex(1.0 + r.z, 0.0), Complex(r.x, -r.y),
       Complex(r.x, r.y),       Complex(1.0 - r.z, 0.0);
  return DensityMatrix::from_trusted(m * 0.5);
}

double qubit_determinant(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("qubit_determinant: qubit state required");
  return rho.entries().determinant().real();
}

// Spectral tools

EigenSystem hermitian_eigensystem(const Matrix& h) {
  require_square(h, "hermitian_eigensystem");
  if (!is_hermitian(h)) throw std::invalid_argument("hermitian_eigensystem: not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(h));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigensystem: solver failed to converge");
  }
  const auto n = h.rows();
  EigenSystem out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  // Eigen sorts ascending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[static_cast<std::size_t>(i)] = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.entries(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double l = solver.eigenvalues()(i);
    if (l > 0.0) s -= l * std::log2(l);
  }
  return std::max(s, 0.0);
}

StateVector apply_unitary(const Matrix& u, const StateVector& psi) {
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.cols()) != psi.dim()) {
    throw std::invalid_argument("apply_unitary: dimension mismatch");
  }
  if (!is_unitary(u)) throw std::invalid_argument("apply_unitary: matrix is not unitary");
  Vector out = u * psi.amplitudes();
  return StateVector(std::move(out));
}

double fidelity_with_pure(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.dim() != psi.dim()) throw std::invalid_argument("fidelity_with_pure: dimension mismatch");
  const Vector& v = psi.amplitudes();
  return std::abs(v.dot(rho.entries() * v));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m, m.adjoint()) <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m.adjoint() * m, Matrix::Identity(m.rows(), m.cols())) <= tol;
}

}  // namespace qkdbound::qstate

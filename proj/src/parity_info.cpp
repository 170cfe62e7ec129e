#include "qkdbound/parity_info.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qkdbound::parity {

using qstate::Complex;
using qstate::Matrix;
using qstate::Vector;

namespace {

void check_bits(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be at least 1");
}

void check_angle(double a, const char* what) {
  if (!(a >= 0.0 && a < std::numbers::pi / 4.0)) {
    throw std::invalid_argument(std::string(what) + ": angle must lie in [0, pi/4)");
  }
}

void check_prior(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("prior must lie in (0, 1)");
}

void check_pair(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != rho1.dim()) throw std::invalid_argument("states have different dimensions");
  if (!rho0.is_normalized() || !rho1.is_normalized()) {
    throw std::invalid_argument("states must be normalized");
  }
}

double central_binomial(int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * static_cast<double>(k + i) / static_cast<double>(i);
  return c;
}

Matrix kron_power(const Eigen::Matrix2d& m, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < 2; ++r) {
      for (Eigen::Index c = 0; c < 2; ++c) {
        next.block(r * out.rows(), c * out.cols(), out.rows(), out.cols()) = m(r, c) * out;
      }
    }
    out = std::move(next);
  }
  return out.cast<Complex>();
}

// Contribution of one outcome to I(label; outcome), given the joint
// probabilities a = P(label 0, k) and b = P(label 1, k).
double outcome_term(double a, double b, double p0, double p1) {
  a = std::max(a, 0.0);
  b = std::max(b, 0.0);
  const double q = a + b;
  double t = 0.0;
  if (a > 0.0) t += a * std::log2(a / (p0 * q));
  if (b > 0.0) t += b * std::log2(b / (p1 * q));
  return t;
}

double expectation(const Vector& u, const Vector& rho_u) { return u.dot(rho_u).real(); }

Matrix haar_unitary(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    if (std::abs(rii) > 0.0) q.col(i) *= rii / std::abs(rii);
  }
  return q;
}

// Coordinate ascent over Givens rotations u_j, u_k ->
//   cos t u_j + e^{i phi} sin t u_k,  -e^{-i phi} sin t u_j + cos t u_k.
class BasisRefiner {
 public:
  BasisRefiner(const Matrix& rho0, const Matrix& rho1, double p0, Matrix basis)
      : rho0_(rho0), rho1_(rho1), p0_(p0), p1_(1.0 - p0), u_(std::move(basis)) {
    r0u_ = rho0_ * u_;
    r1u_ = rho1_ * u_;
    const auto d = u_.cols();
    a_.resize(static_cast<std::size_t>(d));
    b_.resize(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k) refresh(k);
  }

  double information() const {
    double total = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) total += outcome_term(a_[k], b_[k], p0_, p1_);
    return total;
  }

  double run(int max_sweeps) {
    double current = information();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      const double before = current;
      const bool coarse = sweep < kCoarseSweeps;
      for (Eigen::Index j = 0; j < u_.cols(); ++j) {
        for (Eigen::Index k = j + 1; k < u_.cols(); ++k) optimize_pair(j, k, coarse);
      }
      current = information();
      if (!coarse && current - before <= 1e-12 * std::max(current, 1e-300)) break;
    }
    return current;
  }

 private:
  static constexpr int kCoarseSweeps = 2;

  struct PairBlock {
    double jj0, kk0, jj1, kk1;
    Complex jk0, jk1;
  };

  void refresh(Eigen::Index k) {
    const auto i = static_cast<std::size_t>(k);
    a_[i] = p0_ * expectation(u_.col(k), r0u_.col(k));
    b_[i] = p1_ * expectation(u_.col(k), r1u_.col(k));
  }

  double pair_value(const PairBlock& blk, double t, double phi) const {
    const double c = std::cos(t);
    const double s = std::sin(t);
    const Complex e = std::polar(1.0, phi);
    const double n0 = c * c * blk.jj0 + s * s * blk.kk0 + 2.0 * c * s * (e * blk.jk0).real();
    const double n1 = c * c * blk.jj1 + s * s * blk.kk1 + 2.0 * c * s * (e * blk.jk1).real();
    const double m0 = blk.jj0 + blk.kk0 - n0;
    const double m1 = blk.jj1 + blk.kk1 - n1;
    return outcome_term(p0_ * n0, p1_ * n1, p0_, p1_) + outcome_term(p0_ * m0, p1_ * m1, p0_, p1_);
  }

  void optimize_pair(Eigen::Index j, Eigen::Index k, bool coarse) {
    const PairBlock blk{expectation(u_.col(j), r0u_.col(j)), expectation(u_.col(k), r0u_.col(k)),
                        expectation(u_.col(j), r1u_.col(j)), expectation(u_.col(k), r1u_.col(k)),
                        u_.col(j).dot(r0u_.col(k)), u_.col(j).dot(r1u_.col(k))};
    const double base = pair_value(blk, 0.0, 0.0);

    constexpr int kAngleGrid = 16;
    constexpr int kPhaseGrid = 8;
    const double pi = std::numbers::pi;
    double best = base;
    double best_t = 0.0;
    double best_phi = 0.0;
    auto better = [&](double v) { return v > best + 1e-15 * std::abs(best) + 1e-300; };
    if (coarse) {
      for (int it = 0; it < kAngleGrid; ++it) {
        const double t = -pi / 2.0 + pi * it / kAngleGrid;
        for (int ip = 0; ip < kPhaseGrid; ++ip) {
          const double phi = pi * ip / kPhaseGrid;
          const double v = pair_value(blk, t, phi);
          if (better(v)) {
            best = v;
            best_t = t;
            best_phi = phi;
          }
        }
      }
    }
    double step_t = coarse ? pi / kAngleGrid / 2.0 : 1e-2;
    double step_phi = coarse ? pi / kPhaseGrid / 2.0 : 1e-2;
    for (int iter = 0; iter < 400 && (step_t > 1e-9 || step_phi > 1e-9); ++iter) {
      bool moved = false;
      const std::array<std::array<double, 2>, 4> moves{
          {{step_t, 0.0}, {-step_t, 0.0}, {0.0, step_phi}, {0.0, -step_phi}}};
      for (const auto& mv : moves) {
        const double v = pair_value(blk, best_t + mv[0], best_phi + mv[1]);
        if (better(v)) {
          best = v;
          best_t += mv[0];
          best_phi += mv[1];
          moved = true;
        }
      }
      if (!moved) {
        step_t *= 0.5;
        step_phi *= 0.5;
      }
    }
    if (!(best - base > 1e-15 * std::max(std::abs(base), 1e-300))) return;

    const double c = std::cos(best_t);
    const double s = std::sin(best_t);
    const Complex e = std::polar(1.0, best_phi);
    auto rotate = [&](Matrix& m) {
      const Vector vj = m.col(j);
      const Vector vk = m.col(k);
      m.col(j) = c * vj + e * s * vk;
      m.col(k) = -std::conj(e) * s * vj + c * vk;
    };
    rotate(u_);
    rotate(r0u_);
    rotate(r1u_);
    refresh(j);
    refresh(k);
  }

  const Matrix& rho0_;
  const Matrix& rho1_;
  double p0_;
  double p1_;
  Matrix u_;
  Matrix r0u_;
  Matrix r1u_;
  std::vector<double> a_;
  std::vector<double> b_;
};

}  // namespace

double i_separate(int n, double alpha) {
  check_bits(n, "i_separate");
  check_angle(alpha, "i_separate");
  return std::pow(2.0 * alpha, 2.0 * n) / (2.0 * std::numbers::ln2);
}

double i_joint(int n, double alpha) {
  check_bits(n, "i_joint");
  check_angle(alpha, "i_joint");
  const bool even = n % 2 == 0;
  const int k = even ? n / 2 : (n + 1) / 2;
  const double c = even ? 1.0 : 1.0 / std::numbers::ln2;
  return c * central_binomial(k) * std::pow(alpha, 2.0 * k);
}

double hamming_prefactor(int n) {
  check_bits(n, "hamming_prefactor");
  return 2.0 * std::sqrt(static_cast<double>(n + 1)) / (std::numbers::ln2 * std::sqrt(std::numbers::pi));
}

double bm_bound(int n, double beta) {
  check_bits(n, "bm_bound");
  check_angle(beta, "bm_bound");
  return hamming_prefactor(n) * std::pow(2.0 * beta, 0.5 * (n + 1));
}

double bm_bound_from_error_rate(int n, double p_e) {
  check_bits(n, "bm_bound_from_error_rate");
  if (!(p_e >= 0.0 && p_e <= 1.0)) {
    throw std::invalid_argument("bm_bound_from_error_rate: p_e must lie in [0, 1]");
  }
  return hamming_prefactor(n) * std::pow(4.0 * p_e, 0.25 * (n + 1));
}

double ehpp_angle(double theta, double p_e) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 4.0)) {
    throw std::invalid_argument("ehpp_angle: theta must lie in (0, pi/4)");
  }
  if (!(p_e >= 0.0 && p_e < 1.0)) throw std::invalid_argument("ehpp_angle: p_e must lie in [0, 1)");
  const double t = std::tan(2.0 * theta);
  return std::pow(t * t * p_e, 0.25);
}

ParityEnsemble build_parity_ensemble(int n, double alpha) {
  if (n < 1 || n > kMaxEnsembleBits) {
    throw std::invalid_argument("build_parity_ensemble: n must lie in [1, 10]");
  }
  check_angle(alpha, "build_parity_ensemble");
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  // Sum and difference of the two bit projectors.
  Eigen::Matrix2d sum;
  sum << 2.0 * c * c, 0.0, 0.0, 2.0 * s * s;
  Eigen::Matrix2d diff;
  diff << 0.0, 2.0 * c * s, 2.0 * c * s, 0.0;
  const Matrix total = kron_power(sum, n);
  const Matrix signed_total = kron_power(diff, n);
  const double scale = std::ldexp(1.0, -n);
  return ParityEnsemble{n, alpha, DensityMatrix::from_trusted(scale * (total + signed_total)),
                        DensityMatrix::from_trusted(scale * (total - signed_total))};
}

double helstrom_information(const DensityMatrix& rho0, const DensityMatrix& rho1, double prior0) {
  check_pair(rho0, rho1);
  check_prior(prior0);
  const double p1 = 1.0 - prior0;
  const auto eig = qstate::hermitian_eigensystem(prior0 * rho0.entries() - p1 * rho1.entries());
  constexpr double kZero = 1e-14;
  double plus0 = 0.0;
  double plus1 = 0.0;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] < -kZero) continue;
    const auto col = eig.vectors.col(static_cast<Eigen::Index>(i));
    plus0 += col.dot(rho0.entries() * col).real();
    plus1 += col.dot(rho1.entries() * col).real();
  }
  plus0 = std::clamp(plus0, 0.0, 1.0);
  plus1 = std::clamp(plus1, 0.0, 1.0);
  return outcome_term(prior0 * plus0, p1 * plus1, prior0, p1) +
         outcome_term(prior0 * (1.0 - plus0), p1 * (1.0 - plus1), prior0, p1);
}

double holevo_bound(const DensityMatrix& rho0, const DensityMatrix& rho1, double prior0) {
  check_pair(rho0, rho1);
  check_prior(prior0);
  const double p1 = 1.0 - prior0;
  const auto mix = DensityMatrix::from_trusted(prior0 * rho0.entries() + p1 * rho1.entries());
  const double chi = qstate::von_neumann_entropy(mix) - prior0 * qstate::von_neumann_entropy(rho0) -
                     p1 * qstate::von_neumann_entropy(rho1);
  return std::max(chi, 0.0);
}

double basis_information(const DensityMatrix& rho0, const DensityMatrix& rho1, double prior0,
                         const Matrix& basis) {
  check_pair(rho0, rho1);
  check_prior(prior0);
  if (static_cast<std::size_t>(basis.rows()) != rho0.dim() || !qstate::is_unitary(basis, 1e-10)) {
    throw std::invalid_argument("basis_information: columns must form an orthonormal basis");
  }
  return BasisRefiner(rho0.entries(), rho1.entries(), prior0, basis).information();
}

double accessible_info_search(const DensityMatrix& rho0, const DensityMatrix& rho1, double prior0,
                              const SearchOptions& options) {
  check_pair(rho0, rho1);
  check_prior(prior0);
  const double p1 = 1.0 - prior0;
  const auto d = static_cast<Eigen::Index>(rho0.dim());

  std::vector<Matrix> starts;
  starts.push_back(
      qstate::hermitian_eigensystem(prior0 * rho0.entries() - p1 * rho1.entries()).vectors);
  starts.push_back(qstate::hermitian_eigensystem(rho0.entries()).vectors);
  starts.push_back(qstate::hermitian_eigensystem(rho1.entries()).vectors);
  std::mt19937_64 rng(options.seed);
  for (int i = 0; i < options.random_starts; ++i) starts.push_back(haar_unitary(d, rng));

  double best = 0.0;
  for (auto& start : starts) {
    BasisRefiner refiner(rho0.entries(), rho1.entries(), prior0, std::move(start));
    best = std::max(best, refiner.run(options.max_sweeps));
  }
  return best;
}

InfoReport info_report(int n, double alpha, const SearchOptions& options) {
  const auto ens = build_parity_ensemble(n, alpha);
  InfoReport r;
  r.i_separate = i_separate(n, alpha);
  r.i_joint = i_joint(n, alpha);
  r.bm_bound = bm_bound(n, alpha);
  r.oracle_helstrom = helstrom_information(ens.rho_even, ens.rho_odd, 0.5);
  r.oracle_search = accessible_info_search(ens.rho_even, ens.rho_odd, 0.5, options);
  r.oracle_holevo = holevo_bound(ens.rho_even, ens.rho_odd, 0.5);
  return r;
}

}  // namespace qkdbound::parity

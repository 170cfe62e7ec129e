#include "qkdbound/attack_lab.hpp"

#include "qkdbound/parity_info.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qkdbound::attack {

using qstate::Complex;
using qstate::Vector;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < kHalfPi)) {
    throw std::invalid_argument("gamma must lie in [0, pi/2)");
  }
}

void check_label(const Scheme& scheme, int label) {
  const int limit = scheme.kind() == SchemeKind::two_state ? 2 : 4;
  if (label < 0 || label >= limit) throw std::invalid_argument("invalid label for scheme");
}

// i^m
Complex i_pow(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double sign_of(int bit) { return bit == 0 ? 1.0 : -1.0; }

StateVector probe_initial() { return StateVector(Vector::Unit(2, 0)); }

double outcome_probability(const StateVector& joint, const StateVector& bob_outcome) {
  const Matrix proj = bob_outcome.amplitudes() * bob_outcome.amplitudes().adjoint();
  const Matrix op = Eigen::kroneckerProduct(Matrix::Identity(2, 2), proj).eval();
  return joint.amplitudes().dot(op * joint.amplitudes()).real();
}

}  // namespace

Scheme Scheme::two_state(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 4.0)) {
    throw std::invalid_argument("two-state scheme: theta must lie in (0, pi/4)");
  }
  return Scheme(SchemeKind::two_state, theta, Basis::x);
}

Scheme Scheme::four_state(Basis basis) { return Scheme(SchemeKind::four_state, 0.0, basis); }

std::array<int, 2> Scheme::labels() const {
  if (kind_ == SchemeKind::two_state) return {0, 1};
  return basis_ == Basis::x ? std::array<int, 2>{0, 2} : std::array<int, 2>{1, 3};
}

Matrix probe_unitary(double gamma) {
  check_gamma(gamma);
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  Matrix u = Matrix::Identity(4, 4);
  u(1, 1) = c;
  u(1, 2) = -s;
  u(2, 1) = s;
  u(2, 2) = c;
  return u;
}

StateVector alice_state(const Scheme& scheme, int label) {
  check_label(scheme, label);
  Vector v(2);
  if (scheme.kind() == SchemeKind::two_state) {
    v << std::cos(scheme.theta()), sign_of(label) * std::sin(scheme.theta());
  } else {
    v << 1.0, i_pow(label);
    v /= std::numbers::sqrt2;
  }
  return StateVector::normalize(v);
}

StateVector wrong_outcome_state(const Scheme& scheme, int label) {
  check_label(scheme, label);
  if (scheme.kind() == SchemeKind::four_state) return alice_state(scheme, (label + 2) % 4);
  // phi_0' = (sin, -cos), phi_1' = (sin, cos): orthogonal to phi_0 and phi_1.
  Vector v(2);
  v << std::sin(scheme.theta()), -sign_of(label) * std::cos(scheme.theta());
  return StateVector::normalize(v);
}

StateVector joint_final_state(const Scheme& scheme, int label, double gamma) {
  return qstate::apply_unitary(probe_unitary(gamma),
                               qstate::tensor(probe_initial(), alice_state(scheme, label)));
}

DensityMatrix bob_reduced_state(const Scheme& scheme, int label, double gamma) {
  const auto joint = DensityMatrix::pure(joint_final_state(scheme, label, gamma));
  return qstate::partial_trace(joint, kEveBob, qstate::Subsystem::second);
}

ErrorRate error_rate(const Scheme& scheme, double gamma) {
  const auto labels = scheme.labels();
  const auto joint = joint_final_state(scheme, labels[0], gamma);
  ErrorRate out;
  out.p_e = outcome_probability(joint, wrong_outcome_state(scheme, labels[0]));
  if (scheme.kind() == SchemeKind::two_state) {
    // Conclusive and correct: the other measurement finds phi_{1-p}'.
    const double right = outcome_probability(joint, wrong_outcome_state(scheme, labels[1]));
    const double conclusive = out.p_e + right;
    out.p_e_conditional = conclusive > 0.0 ? out.p_e / conclusive : 0.0;
  }
  return out;
}

qstate::PositiveOperator eve_condition(const Scheme& scheme) {
  if (scheme.kind() == SchemeKind::four_state) return qstate::PositiveOperator::identity(2);
  const Vector a = wrong_outcome_state(scheme, 0).amplitudes();
  const Vector b = wrong_outcome_state(scheme, 1).amplitudes();
  return qstate::PositiveOperator(0.5 * (a * a.adjoint()) + 0.5 * (b * b.adjoint()));
}

EveState eve_reduced_state(const Scheme& scheme, int label, double gamma) {
  const auto joint = DensityMatrix::pure(joint_final_state(scheme, label, gamma));
  const auto weighted = qstate::conditioned_reduced_state(joint, kEveBob, qstate::Subsystem::first,
                                                          eve_condition(scheme));
  return EveState{weighted.normalized(), weighted.weight()};
}

double AttackAnalysis::bound(int bits) const { return parity::bm_bound(bits, beta); }

AttackAnalysis analyze(const AttackParams& params, int n) {
  check_gamma(params.gamma);
  if (n < 1) throw std::invalid_argument("analyze: n must be at least 1");
  const Scheme& scheme = params.scheme;
  const auto labels = scheme.labels();
  const auto rate = error_rate(scheme, params.gamma);
  const auto eve0 = eve_reduced_state(scheme, labels[0], params.gamma);
  const auto eve1 = eve_reduced_state(scheme, labels[1], params.gamma);
  const auto pair = geometry::canonicalize_pair(eve0.state, eve1.state);
  const auto cms = geometry::decompose_cms(pair);
  const auto pole = geometry::decompose_pole(pair);

  std::optional<double> rate_bound;
  if (scheme.kind() == SchemeKind::four_state) {
    rate_bound = parity::bm_bound_from_error_rate(n, rate.p_e);
  }
  return AttackAnalysis{
      .scheme = scheme,
      .gamma = params.gamma,
      .n = n,
      .p_e = rate.p_e,
      .p_e_conditional = rate.p_e_conditional,
      .bob_states = {bob_reduced_state(scheme, labels[0], params.gamma),
                     bob_reduced_state(scheme, labels[1], params.gamma)},
      .eve_states = {eve0.state, eve1.state},
      .eve_weights = {eve0.weight, eve1.weight},
      .pair = pair,
      .x = pair.x,
      .z = pair.z,
      .beta = cms.beta,
      .beta_pole = pole.beta,
      .bound_bits = parity::bm_bound(n, cms.beta),
      .error_rate_bound_bits = rate_bound,
  };
}

double max_error_rate(const Scheme& scheme) {
  // Limits of the closed forms as gamma -> pi/2.
  if (scheme.kind() == SchemeKind::four_state) return 0.5;
  const double s = std::sin(scheme.theta());
  return s * s;
}

double gamma_for_error_rate(const Scheme& scheme, double p_e_target) {
  if (!(p_e_target >= 0.0 && p_e_target < max_error_rate(scheme))) {
    throw std::invalid_argument("gamma_for_error_rate: target error rate is not attainable");
  }
  if (p_e_target == 0.0) return 0.0;
  double lo = 0.0;
  double hi = kHalfPi;
  double f_lo = 0.0;
  double f_hi = max_error_rate(scheme);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = error_rate(scheme, mid).p_e;
    if (f < p_e_target) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
      f_hi = f;
    }
  }
  if (hi < kHalfPi && std::abs(f_hi - p_e_target) < std::abs(f_lo - p_e_target)) return hi;
  return lo;
}

namespace closed_form {

Matrix bob_state(const Scheme& scheme, int label, double gamma) {
  check_label(scheme, label);
  const double cg = std::cos(gamma);
  const double sg = std::sin(gamma);
  Matrix m(2, 2);
  if (scheme.kind() == SchemeKind::two_state) {
    const double ct = std::cos(scheme.theta());
    const double st = std::sin(scheme.theta());
    const double off = sign_of(label) * ct * st * cg;
    m << ct * ct + st * st * sg * sg, off, off, st * st * cg * cg;
  } else {
    const Complex phase = i_pow(label);
    m << 0.5 + 0.5 * sg * sg, 0.5 * std::conj(phase) * cg, 0.5 * phase * cg, 0.5 - 0.5 * sg * sg;
  }
  return m;
}

Matrix eve_state(const Scheme& scheme, int label, double gamma) {
  check_label(scheme, label);
  const double cg = std::cos(gamma);
  const double sg = std::sin(gamma);
  Matrix m(2, 2);
  if (scheme.kind() == SchemeKind::two_state) {
    const double ct = std::cos(scheme.theta());
    const double st = std::sin(scheme.theta());
    const double off = sign_of(label) * ct * st * st * st * sg;
    m << st * st * ct * ct + st * st * ct * ct * cg * cg, off, off, st * st * st * st * sg * sg;
  } else {
    const Complex phase = i_pow(label);
    m << 0.5 + 0.5 * cg * cg, 0.5 * std::conj(phase) * sg, 0.5 * phase * sg, 0.5 - 0.5 * cg * cg;
  }
  return m;
}

double error_rate(const Scheme& scheme, double gamma) {
  if (scheme.kind() == SchemeKind::four_state) {
    const double s = std::sin(gamma / 2.0);
    return s * s;
  }
  const double ct = std::cos(scheme.theta());
  const double st = std::sin(scheme.theta());
  const double cg = std::cos(gamma);
  const double sg = std::sin(gamma);
  return st * st * ct * ct * (1.0 - cg) * (1.0 - cg) + st * st * st * st * sg * sg;
}

std::array<double, 2> eve_xz(const Scheme& scheme, double gamma) {
  const double cg = std::cos(gamma);
  const double sg = std::sin(gamma);
  if (scheme.kind() == SchemeKind::four_state) return {sg, cg * cg};
  const double ct = std::cos(scheme.theta());
  const double st = std::sin(scheme.theta());
  const double tr = st * st * ct * ct * (1.0 + cg * cg) + st * st * st * st * sg * sg;
  return {2.0 * sg * ct * st * st * st / tr,
          (ct * ct * st * st * (1.0 + cg * cg) - st * st * st * st * sg * sg) / tr};
}

}  // namespace closed_form

}  // namespace qkdbound::attack

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qvac/errors.hpp"
#include "qvac/state.hpp"

namespace qvac {

/// Annihilation matrix on a dim-dimensional number basis: sqrt(n) on the
/// first superdiagonal, zero elsewhere.
template <class Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ladder_lower(Eigen::Index dim) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(Scalar(n));
  return a;
}

/// Truncated operator matrices for one stiffness gamma:
///   p = sqrt(hbar gamma / 2) (a + a†),  q = i sqrt(hbar / (2 gamma)) (a - a†),
/// so that (p - i gamma q) / sqrt(2 hbar gamma) is exactly the annihilator a.
struct FockRepresentation {
  Eigen::Index dim = 0;
  Eigen::MatrixXcd lower;  // a
  Eigen::MatrixXcd raise;  // a†
  Eigen::MatrixXcd p_op;
  Eigen::MatrixXcd q_op;
  double gamma = 1.0;
  PhysicalConstants constants;
};

inline FockRepresentation build_fock(double gamma, const PhysicalConstants& constants,
                                     Eigen::Index dim) {
  if (dim < 4)
    throw std::invalid_argument("fock dimension must be >= 4, got " + std::to_string(dim));
  validate(constants);
  if (!(gamma > 0.0))
    throw std::domain_error("gamma must be positive, got " + std::to_string(gamma));
  FockRepresentation rep;
  rep.dim = dim;
  rep.lower = ladder_lower<double>(dim).cast<Complex>();
  rep.raise = rep.lower.adjoint();
  rep.p_op = std::sqrt(constants.hbar * gamma / 2.0) * (rep.lower + rep.raise);
  rep.q_op = Complex(0.0, 1.0) * std::sqrt(constants.hbar / (2.0 * gamma)) *
             (rep.lower - rep.raise);
  rep.gamma = gamma;
  rep.constants = constants;
  return rep;
}

/// Coefficients of the mixing b = u a + v a† whose vacuum is the alpha state;
/// |u|^2 - |v|^2 = 1.
struct BogoliubovPair {
  Complex u{1.0, 0.0};
  Complex v{0.0, 0.0};
};

inline BogoliubovPair bogoliubov_coefficients(double alpha) {
  if (!(std::abs(alpha) < std::numbers::pi / 2 - kAlphaMargin))
    throw std::domain_error("alpha must lie in (-pi/2, pi/2) with cos(alpha) > 0, got " +
                            std::to_string(alpha));
  const double denom = 2.0 * std::sqrt(std::cos(alpha));
  const Complex phase = std::polar(1.0, alpha);
  return BogoliubovPair{(1.0 + phase) / denom, (1.0 - phase) / denom};
}

/// The operator whose kernel defines the alpha vacuum: p - i gamma e^{i alpha} q.
/// Equals sqrt(2 hbar gamma cos(alpha)) * (u a + v a†).
inline Eigen::MatrixXcd annihilator_matrix(const FockRepresentation& rep, double alpha) {
  return rep.p_op - Complex(0.0, 1.0) * rep.gamma * std::polar(1.0, alpha) * rep.q_op;
}

/// Number-basis coefficients of the alpha vacuum at one truncation.
struct FockStateVector {
  Eigen::VectorXcd coeffs;
  double alpha = 0.0;
  double residual = 0.0;  // achieved ||(p - i gamma e^{i alpha} q) x||
};

/// Finds the unit vector minimizing ||(p - i gamma e^{i alpha} q) x|| as the
/// right singular vector of the smallest singular value. The global phase is
/// fixed by making coeffs[0] real and positive.
inline FockStateVector solve_vacuum_vector(const FockRepresentation& rep, double alpha) {
  if (!(std::abs(alpha) < std::numbers::pi / 2 - kAlphaMargin))
    throw std::domain_error("alpha must lie in (-pi/2, pi/2) with cos(alpha) > 0, got " +
                            std::to_string(alpha));
  const Eigen::MatrixXcd op = annihilator_matrix(rep, alpha);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op, Eigen::ComputeThinV);
  Eigen::VectorXcd x = svd.matrixV().col(rep.dim - 1);
  const Complex head = x(0);
  if (std::abs(head) > 0.0) x *= std::conj(head) / std::abs(head);
  FockStateVector vec;
  vec.coeffs = std::move(x);
  vec.alpha = alpha;
  vec.residual = (op * vec.coeffs).norm();
  if (rep.dim >= 256 && std::abs(alpha) <= std::numbers::pi / 3 && vec.residual > 1e-6)
    throw convergence_error("vacuum-vector residual " + std::to_string(vec.residual) +
                            " at dim " + std::to_string(rep.dim) + " exceeds 1e-6");
  return vec;
}

/// Matrix-expectation moments: var_q = <x|q^2|x>, var_p = <x|p^2|x>,
/// correlator = <x|p q|x>, all via matrix-vector products.
inline MomentSet fock_moments(const FockRepresentation& rep, const FockStateVector& vec) {
  const Eigen::VectorXcd qx = rep.q_op * vec.coeffs;
  const Eigen::VectorXcd px = rep.p_op * vec.coeffs;
  MomentSet m;
  m.var_q = qx.squaredNorm();
  m.var_p = px.squaredNorm();
  m.correlator = px.dot(qx);  // (p x)† (q x) = <x| p q |x> for Hermitian p
  m.cov_sym = m.correlator.real();
  m.route = Route::fock;
  return m;
}

}  // namespace qvac

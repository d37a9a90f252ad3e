#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "qvac/errors.hpp"
#include "qvac/state.hpp"

namespace qvac {

enum class QuadratureKind { gauss_hermite, adaptive_trapezoid };

/// Numerical integration rule over the real line.
///  - gauss_hermite: node_count is the rule size; exact for Gaussians whose
///    width matches `scale` times polynomials up to degree 2n-1.
///  - adaptive_trapezoid: node_count is the node budget; the interval is
///    [-10 scale, +10 scale] and panels are doubled until `abs_tol` is met.
/// `scale` is the physical width sigma of the target density; nodes are
/// mapped as q = sqrt(2) * scale * x.
struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::gauss_hermite;
  int node_count = 64;
  double scale = 1.0;
  double abs_tol = 1e-10;
};

struct QuadratureReport {
  Complex value{};
  double est_error = 0.0;
  int node_count_used = 0;
};

/// Gauss-Hermite nodes/weights for weight exp(-x^2) on (-inf, inf).
/// weights_exp holds w_i * exp(x_i^2), the well-scaled form used when the
/// integrand already contains the Gaussian factor.
struct HermiteTable {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd weights_exp;
};

namespace detail {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Hermite
// recurrence, weights come from the first eigenvector components.
inline HermiteTable compute_hermite_table(int n) {
  if (n < 1) throw std::invalid_argument("hermite rule size must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  HermiteTable t;
  t.nodes = es.eigenvalues();
  t.weights.resize(n);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    t.weights(i) = sqrt_pi * v0 * v0;
  }
  // The rule is symmetric; average the mirrored pairs to strip rounding noise.
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    const double x = 0.5 * (t.nodes(j) - t.nodes(i));
    t.nodes(i) = -x;
    t.nodes(j) = x;
    const double w = 0.5 * (t.weights(i) + t.weights(j));
    t.weights(i) = w;
    t.weights(j) = w;
  }
  if (n % 2 == 1) t.nodes(n / 2) = 0.0;
  t.weights_exp.resize(n);
  for (int i = 0; i < n; ++i)
    t.weights_exp(i) = t.weights(i) * std::exp(t.nodes(i) * t.nodes(i));
  return t;
}

}  // namespace detail

/// Cached Gauss-Hermite table; initialize-once, read-only afterwards.
inline const HermiteTable& hermite_table(int n) {
  static std::mutex mu;
  static std::map<int, HermiteTable> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_hermite_table(n)).first;
  return it->second;
}

namespace detail {

template <class F>
QuadratureReport integrate_gauss_hermite(F&& f, const QuadratureRule& rule) {
  const int n = rule.node_count;
  const double s = std::numbers::sqrt2 * rule.scale;
  auto apply = [&](const HermiteTable& t) {
    Complex acc{};
    for (int i = 0; i < t.nodes.size(); ++i) acc += t.weights_exp(i) * f(s * t.nodes(i));
    return s * acc;
  };
  const Complex full = apply(hermite_table(n));
  const Complex half = apply(hermite_table(std::max(n / 2, 1)));
  QuadratureReport rep{full, std::abs(full - half), n};
  if (rep.est_error > rule.abs_tol)
    throw convergence_error("gauss-hermite rule of size " + std::to_string(n) +
                            " estimated error " + std::to_string(rep.est_error) +
                            " exceeds tolerance " + std::to_string(rule.abs_tol));
  return rep;
}

template <class F>
QuadratureReport integrate_adaptive_trapezoid(F&& f, const QuadratureRule& rule) {
  const double limit = 10.0 * rule.scale;
  int panels = 64;
  double h = 2.0 * limit / panels;
  Complex acc = 0.5 * (f(-limit) + f(limit));
  for (int i = 1; i < panels; ++i) acc += f(-limit + i * h);
  Complex integral = h * acc;
  int nodes_used = panels + 1;
  while (true) {
    // Halve the step, reusing previous nodes; new contributions are midpoints.
    Complex mid{};
    for (int i = 0; i < panels; ++i) mid += f(-limit + (i + 0.5) * h);
    const Complex refined = 0.5 * integral + 0.5 * h * mid;
    panels *= 2;
    h *= 0.5;
    nodes_used = panels + 1;
    const double est = std::abs(refined - integral);
    integral = refined;
    if (est <= rule.abs_tol) return QuadratureReport{integral, est, nodes_used};
    if (2 * panels + 1 > rule.node_count)
      throw convergence_error("adaptive trapezoid exhausted its budget of " +
                              std::to_string(rule.node_count) + " nodes at estimated error " +
                              std::to_string(est));
  }
}

}  // namespace detail

/// Integrates f over the real line with the given rule.
template <class F>
QuadratureReport integrate_line(F&& f, const QuadratureRule& rule) {
  if (rule.node_count < 2) throw std::invalid_argument("node_count must be >= 2");
  if (!(rule.scale > 0.0)) throw std::invalid_argument("rule scale must be positive");
  switch (rule.kind) {
    case QuadratureKind::gauss_hermite:
      return detail::integrate_gauss_hermite(std::forward<F>(f), rule);
    case QuadratureKind::adaptive_trapezoid:
      return detail::integrate_adaptive_trapezoid(std::forward<F>(f), rule);
  }
  throw std::logic_error("unreachable quadrature kind");
}

/// Default production rule: 64-node Gauss-Hermite scaled to the state's
/// physical width sqrt(var_q). The width already carries the 1/sqrt(cos a)
/// broadening, so coverage tracks the density at every admissible alpha.
inline QuadratureRule default_rule(const GaussianState& s) {
  return QuadratureRule{QuadratureKind::gauss_hermite, 64,
                        std::sqrt(closed_form_moments(s).var_q), 1e-10};
}

/// Cross-check rule on [-10 sigma, +10 sigma], guarding against a systematic
/// error shared with the Gauss-Hermite route.
inline QuadratureRule crosscheck_rule(const GaussianState& s) {
  return QuadratureRule{QuadratureKind::adaptive_trapezoid, 1 << 20,
                        std::sqrt(closed_form_moments(s).var_q), 1e-10};
}

/// integral of q^power |psi(q)|^2 dq for power in {0, 2, 4}.
/// The value is returned as a complex number; its imaginary residue is
/// reported, not dropped.
inline QuadratureReport integrate_density_moment(const GaussianState& s, int power,
                                                 const QuadratureRule& rule) {
  if (power != 0 && power != 2 && power != 4)
    throw std::invalid_argument("density moment power must be 0, 2 or 4, got " +
                                std::to_string(power));
  return integrate_line(
      [&](double q) {
        const Complex psi = psi_eval(s, q);
        Complex v = std::conj(psi) * psi;
        for (int k = 0; k < power; k += 2) v *= q * q;
        return v;
      },
      rule);
}

/// hbar^2 * integral of |dpsi/dq|^2 dq, the momentum variance.
inline QuadratureReport momentum_variance_quad(const GaussianState& s,
                                               const QuadratureRule& rule) {
  const double hbar = s.constants.hbar;
  return integrate_line(
      [&](double q) {
        const Complex d = hbar * psi_derivative(s, q);
        return std::conj(d) * d;
      },
      rule);
}

/// integral of psi*(q) (hbar/i) d/dq [q psi(q)] dq, the complex correlator
/// <psi| p q |psi>.
inline QuadratureReport correlator_quad(const GaussianState& s, const QuadratureRule& rule) {
  const Complex minus_i_hbar(0.0, -s.constants.hbar);
  return integrate_line(
      [&](double q) {
        const Complex psi = psi_eval(s, q);
        return std::conj(psi) * minus_i_hbar * (psi + q * psi_derivative(s, q));
      },
      rule);
}

/// Assembles the full quadrature-route MomentSet.
inline MomentSet quadrature_moments(const GaussianState& s, const QuadratureRule& rule) {
  MomentSet m;
  m.var_q = integrate_density_moment(s, 2, rule).value.real();
  m.var_p = momentum_variance_quad(s, rule).value.real();
  m.correlator = correlator_quad(s, rule).value;
  m.cov_sym = m.correlator.real();
  m.route = Route::quadrature;
  return m;
}

}  // namespace qvac

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qvac/errors.hpp"

namespace qvac {

using Complex = std::complex<double>;

// States with |alpha| inside this margin of pi/2 are rejected, not clamped:
// the 1/cos(alpha) divergence there is physical, and clamping would hide it.
inline constexpr double kAlphaMargin = 1e-9;

/// Unit system every computation is expressed in (defaults: hbar = k_B = m = 1).
struct PhysicalConstants {
  double hbar = 1.0;       ///< action
  double boltzmann = 1.0;  ///< energy per temperature
  double mass = 1.0;       ///< mass entering the kinetic term p^2/2m
};

/// (gamma, alpha) pair selecting one member of the Gaussian vacuum family.
/// gamma > 0 is the stiffness scale; alpha in (-pi/2, pi/2) is the phase angle.
struct VacuumParameters {
  double gamma = 1.0;
  double alpha = 0.0;
};

/// Which of the three independent computation routes produced a result.
enum class Route { closed_form, quadrature, fock };

inline const char* to_string(Route r) {
  switch (r) {
    case Route::closed_form: return "closed_form";
    case Route::quadrature: return "quadrature";
    case Route::fock: return "fock";
  }
  return "?";
}

/// Normalized complex-Gaussian wavefunction psi(q) = norm * exp(-c q^2).
struct GaussianState {
  VacuumParameters params;
  PhysicalConstants constants;
  double norm = 0.0;          // positive normalization constant
  Complex exponent_coeff{};   // c, with Re(c) > 0
};

/// Centered second moments of a state from one computation route.
/// correlator is <psi| p q |psi>; cov_sym is its real (symmetrized) part.
struct MomentSet {
  double var_q = 0.0;
  double var_p = 0.0;
  Complex correlator{};
  double cov_sym = 0.0;
  Route route = Route::closed_form;
};

inline void validate(const PhysicalConstants& c) {
  if (!(c.hbar > 0.0))
    throw std::domain_error("hbar must be positive, got " + std::to_string(c.hbar));
  if (!(c.boltzmann > 0.0))
    throw std::domain_error("boltzmann must be positive, got " + std::to_string(c.boltzmann));
  if (!(c.mass > 0.0))
    throw std::domain_error("mass must be positive, got " + std::to_string(c.mass));
}

inline void validate(const VacuumParameters& p) {
  if (!(p.gamma > 0.0))
    throw std::domain_error("gamma must be positive, got " + std::to_string(p.gamma));
  // cos(alpha) > 0 is required for normalizability; reject the margin too.
  if (!(std::abs(p.alpha) < std::numbers::pi / 2 - kAlphaMargin))
    throw std::domain_error("alpha must lie in (-pi/2, pi/2), away from the endpoints by " +
                            std::to_string(kAlphaMargin) + ", got " + std::to_string(p.alpha));
}

/// Ground-width squared (Delta q_0)^2 = hbar / (2 gamma).
inline double delta_q0_squared(const VacuumParameters& p, const PhysicalConstants& c) {
  validate(c);
  if (!(p.gamma > 0.0))
    throw std::domain_error("gamma must be positive, got " + std::to_string(p.gamma));
  return c.hbar / (2.0 * p.gamma);
}

/// Builds the normalized state psi(q) = [2 pi dq0^2 / cos a]^(-1/4) exp(-q^2 e^{ia} / (4 dq0^2)).
inline GaussianState make_state(const VacuumParameters& p, const PhysicalConstants& c = {}) {
  validate(c);
  validate(p);
  const double dq02 = c.hbar / (2.0 * p.gamma);
  const double cos_a = std::cos(p.alpha);
  const Complex coeff = std::polar(1.0, p.alpha) / (4.0 * dq02);
  const double norm = std::pow(2.0 * std::numbers::pi * dq02 / cos_a, -0.25);
  return GaussianState{p, c, norm, coeff};
}

/// psi(q); total on finite q, even in q, |psi(q)| <= norm.
inline Complex psi_eval(const GaussianState& s, double q) {
  return s.norm * std::exp(-s.exponent_coeff * (q * q));
}

/// d psi / dq = -2 c q psi(q).
inline Complex psi_derivative(const GaussianState& s, double q) {
  return -2.0 * s.exponent_coeff * q * psi_eval(s, q);
}

/// Closed-form moments of the family:
///   var_q = hbar / (2 gamma cos a),  var_p = gamma^2 var_q,
///   correlator = -(hbar/2) tan a - i hbar/2.
/// var_p is computed literally as gamma^2 * var_q so the proportionality is exact.
inline MomentSet closed_form_moments(const GaussianState& s) {
  const double hbar = s.constants.hbar;
  const double gamma = s.params.gamma;
  const double cos_a = std::cos(s.params.alpha);
  MomentSet m;
  m.var_q = hbar / (2.0 * gamma * cos_a);
  m.var_p = gamma * gamma * m.var_q;
  m.correlator = Complex(-0.5 * hbar * std::tan(s.params.alpha), -0.5 * hbar);
  m.cov_sym = m.correlator.real();
  m.route = Route::closed_form;
  return m;
}

}  // namespace qvac

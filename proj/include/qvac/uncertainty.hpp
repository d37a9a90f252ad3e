#pragma once

#include <cmath>
#include <complex>

#include "qvac/state.hpp"

namespace qvac {

/// Uncertainties product, correlator magnitude, and the gaps of the two
/// uncertainty relations. The bound is evaluated with the correlator
/// magnitude |R| (action units), not its square.
struct UncertaintyReport {
  double up = 0.0;        ///< Delta p * Delta q
  double corr_mag = 0.0;  ///< |<p q>|
  double sur_gap = 0.0;   ///< up - corr_mag
  double hur_gap = 0.0;   ///< up - hbar/2
  bool saturated = false;
};

/// saturation_tol_hbar scales with hbar: saturated iff |sur_gap| <= tol * hbar.
/// The default 1e-9 suits the closed-form and quadrature routes; the Fock
/// route needs a looser setting (truncation noise).
inline UncertaintyReport evaluate_sur(const MomentSet& m, const PhysicalConstants& c,
                                      double saturation_tol_hbar = 1e-9) {
  UncertaintyReport r;
  r.up = std::sqrt(m.var_p * m.var_q);
  r.corr_mag = std::abs(m.correlator);
  r.sur_gap = r.up - r.corr_mag;
  r.hur_gap = r.up - 0.5 * c.hbar;
  r.saturated = std::abs(r.sur_gap) <= saturation_tol_hbar * c.hbar;
  return r;
}

/// The purely quantum part of the environmental influence, hbar/2.
inline double quantum_influence_measure(const PhysicalConstants& c) { return 0.5 * c.hbar; }

}  // namespace qvac

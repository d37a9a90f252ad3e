#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "qvac/errors.hpp"
#include "qvac/state.hpp"

namespace qvac {

/// Oscillator energy split for a state, under the mapping omega = gamma:
/// kinetic = var_p / 2m, potential = (m gamma^2 / 2) var_q.
struct EnergyReport {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double zero_point = 0.0;    ///< hbar gamma / 2
  double excess_ratio = 0.0;  ///< total / zero_point = 1/cos(alpha), >= 1
};

inline EnergyReport energy_decomposition(const MomentSet& m, const VacuumParameters& p,
                                         const PhysicalConstants& c) {
  EnergyReport e;
  e.kinetic = m.var_p / (2.0 * c.mass);
  e.potential = 0.5 * c.mass * p.gamma * p.gamma * m.var_q;
  e.total = e.kinetic + e.potential;
  e.zero_point = 0.5 * c.hbar * p.gamma;
  e.excess_ratio = e.total / e.zero_point;
  return e;
}

enum class StateKind { cold_vacuum, arbitrary_vacuum };

inline const char* to_string(StateKind k) {
  return k == StateKind::cold_vacuum ? "cold_vacuum" : "arbitrary_vacuum";
}

struct StateClassification {
  StateKind kind = StateKind::cold_vacuum;
  double alpha = 0.0;
  std::string note;
};

/// Depends on alpha alone: cold vacuum iff |alpha| <= tolerance.
inline StateClassification classify_state(const VacuumParameters& p, double tolerance = 1e-12) {
  StateClassification cls;
  cls.alpha = p.alpha;
  if (std::abs(p.alpha) <= tolerance) {
    cls.kind = StateKind::cold_vacuum;
    cls.note = "equilibrium with the cold vacuum; Heisenberg-saturated";
  } else {
    cls.kind = StateKind::arbitrary_vacuum;
    cls.note = "SUR-saturated, Heisenberg-strict; thermal-like (Umezawa)";
  }
  return cls;
}

/// Diagnostic extension, not a statement of the family's thermodynamics:
/// inverts the Planck-form occupation coth(hbar gamma / (2 k_B T)) =
/// excess_ratio by bracketed bisection. Returns nothing at excess_ratio = 1
/// (the T = 0 limit).
inline std::optional<double> effective_temperature(const EnergyReport& e,
                                                   const VacuumParameters& p,
                                                   const PhysicalConstants& c) {
  const double r = e.excess_ratio;
  if (!(r >= 1.0))
    throw std::domain_error("excess_ratio must be >= 1, got " + std::to_string(r));
  if (r == 1.0) return std::nullopt;
  const auto coth = [](double x) { return 1.0 / std::tanh(x); };
  // coth is strictly decreasing on (0, inf) from +inf to 1.
  double lo = 0.1 / r;
  while (coth(lo) <= r) lo *= 0.5;
  double hi = std::max(1.0, 2.0 * lo);
  while (coth(hi) >= r) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    (coth(mid) >= r ? lo : hi) = mid;
  }
  const double x = 0.5 * (lo + hi);  // x = hbar gamma / (2 k_B T)
  return c.hbar * p.gamma / (2.0 * c.boltzmann * x);
}

}  // namespace qvac

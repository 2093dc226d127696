#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "decobound/optimize.hpp"
#include "decobound/quantum.hpp"
#include "decobound/quantum_bound.hpp"

// Optomechanical gravitational-decoherence model. A photon stored for a
// time t in a cavity with one harmonically bound mirror picks up which-path
// decoherence from the mirror's thermal and gravitational heating; the
// two-cavity photonic qubit pair ends up in the state
//   rho_f(t) = (1+R)/2 |Psi+><Psi+| + (1-R)/2 |Psi-><Psi-|,
//   R(t) = exp(-(1 + 2 nbar) (4 g0^2/omega_m^2) sin^2(omega_m t / 2) / 2),
// with nbar = 2 (Lambda_grav + Lambda_heat) / gamma_m,
// Lambda_grav = (2 pi / 3) G density / omega_m and
// Lambda_heat = k_B T / (hbar Q), Q = omega_m / gamma_m. All quantities SI.

namespace decobound {

// CODATA 2018 values; override only deliberately.
struct PhysicalConstants {
  double gravitational_constant = 6.67430e-11;  // m^3 / (kg s^2)
  double boltzmann = 1.380649e-23;              // J / K
  double hbar = 1.054571817e-34;                // J s
};

struct OptomechParams {
  double g0;           // single-photon optomechanical coupling, 1/s
  double omega_m;      // mechanical frequency, rad/s
  double gamma_m;      // mechanical damping, 1/s
  double temperature;  // K
  double density;      // mirror material density, kg/m^3

  double quality() const { return omega_m / gamma_m; }

  void validate() const {
    if (!(g0 > 0) || !(omega_m > 0) || !(gamma_m > 0))
      throw std::invalid_argument("OptomechParams: rates must be positive");
    if (temperature < 0 || density < 0)
      throw std::invalid_argument("OptomechParams: negative temperature or density");
    if (quality() < 1.0)
      throw std::invalid_argument("OptomechParams: quality factor below 1");
  }

  double period() const { return 2.0 * M_PI / omega_m; }
};

inline double lambda_grav(const OptomechParams& p,
                          const PhysicalConstants& c = {}) {
  p.validate();
  return (2.0 * M_PI / 3.0) * c.gravitational_constant * p.density / p.omega_m;
}

inline double lambda_heat(const OptomechParams& p,
                          const PhysicalConstants& c = {}) {
  p.validate();
  return c.boltzmann * p.temperature / (c.hbar * p.quality());
}

// Steady-state mean phonon number 2 Lambda / gamma_m.
inline double nbar(const OptomechParams& p, bool include_gravity,
                   const PhysicalConstants& c = {}) {
  double rate = lambda_heat(p, c);
  if (include_gravity) rate += lambda_grav(p, c);
  return 2.0 * rate / p.gamma_m;
}

// Off-diagonal suppression factor of the two-cavity photon state; periodic
// with period 2 pi / omega_m, equal to 1 at multiples of the period.
inline double coherence_R(const OptomechParams& p, double t,
                          bool include_gravity,
                          const PhysicalConstants& c = {}) {
  if (t < 0) throw std::invalid_argument("coherence_R: negative time");
  double n = nbar(p, include_gravity, c);
  double s = std::sin(0.5 * p.omega_m * t);
  double beta2 = 4.0 * p.g0 * p.g0 / (p.omega_m * p.omega_m) * s * s;
  return std::exp(-0.5 * (1.0 + 2.0 * n) * beta2);
}

// Bell-basis probabilities of rho_f given the coherence factor R.
inline BellDiagonalState bell_probs_from_R(double r) {
  if (r < -1.0 || r > 1.0)
    throw std::invalid_argument("bell_probs_from_R: R outside [-1, 1]");
  return BellDiagonalState({0.0, 0.0, 0.5 * (1.0 + r), 0.5 * (1.0 - r)});
}

inline TwoQubitState rho_f(const OptomechParams& p, double t,
                           bool include_gravity,
                           const PhysicalConstants& c = {}) {
  return bell_probs_from_R(coherence_R(p, t, include_gravity, c)).to_state();
}

// Dec(A|E) of rho_f(t): (1/4)(1 + sqrt(1 - R^2)).
inline double dec_of_t(const OptomechParams& p, double t, bool include_gravity,
                       const PhysicalConstants& c = {}) {
  double r = coherence_R(p, t, include_gravity, c);
  return 0.25 * (1.0 + std::sqrt(std::max(1.0 - r * r, 0.0)));
}

// CHSH value of the heating-only state under the standard measurement set,
// sqrt(2) (1 + R). Pass include_gravity = true for the observable curve a
// correct gravitational model would predict.
inline double beta_mech(const OptomechParams& p, double t,
                        bool include_gravity = false,
                        const PhysicalConstants& c = {}) {
  return std::sqrt(2.0) * (1.0 + coherence_R(p, t, include_gravity, c));
}

// Maximal CHSH value 2 sqrt(1 + R^2) of the same state (optimal
// measurements at each time).
inline double beta_mech_optimal(const OptomechParams& p, double t,
                                bool include_gravity = false,
                                const PhysicalConstants& c = {}) {
  double r = coherence_R(p, t, include_gravity, c);
  return 2.0 * std::sqrt(1.0 + r * r);
}

inline constexpr double kNotFalsifiable =
    std::numeric_limits<double>::quiet_NaN();

// beta_fals for a model Dec value; NaN when no CHSH value can exclude it.
inline double beta_fals_of_dec(double dec, double tol = 1e-10) {
  if (dec <= 0.25 + 1e-12) return kTwoSqrtTwo;
  try {
    return beta_fals(dec, tol);
  } catch (const NotFalsifiableError&) {
    return kNotFalsifiable;
  }
}

struct DecoherenceCurve {
  std::vector<double> times;
  std::vector<double> dec_grav;   // Dec with gravitational heating included
  std::vector<double> dec_heat;   // Dec from mechanical heating only
  std::vector<double> beta_mech;  // standard-measurement CHSH, heating only
  std::vector<double> beta_fals;  // minimal falsifying CHSH value
  std::vector<double> gap;        // beta_mech - beta_fals
};

inline DecoherenceCurve decoherence_curve(const OptomechParams& p,
                                          const std::vector<double>& times,
                                          const PhysicalConstants& c = {},
                                          double inversion_tol = 1e-10) {
  DecoherenceCurve out;
  out.times = times;
  out.dec_grav.reserve(times.size());
  for (double t : times) {
    double dg = dec_of_t(p, t, true, c);
    double dh = dec_of_t(p, t, false, c);
    double bm = beta_mech(p, t, false, c);
    double bf = beta_fals_of_dec(dg, inversion_tol);
    out.dec_grav.push_back(dg);
    out.dec_heat.push_back(dh);
    out.beta_mech.push_back(bm);
    out.beta_fals.push_back(bf);
    out.gap.push_back(bm - bf);
  }
  return out;
}

struct OptimalTime {
  double t_max = 0.0;
  double gap = 0.0;
  bool falsifiable = false;  // false when the gap is nowhere positive
};

// Gaps below the resolution of the bound inversion do not count as a
// usable falsification window.
inline constexpr double kGapResolution = 1e-9;

// Maximizes g(t) = beta_mech(t) - beta_fals(t) on [t_lo, t_hi] with a dense
// grid followed by golden-section refinement around the best grid cell.
inline OptimalTime optimal_time(const OptomechParams& p, double t_lo,
                                double t_hi, int grid_n = 4097,
                                const PhysicalConstants& c = {}) {
  if (!(t_hi > t_lo) || t_lo < 0)
    throw std::invalid_argument("optimal_time: bad window");
  if (grid_n < 16) throw std::invalid_argument("optimal_time: grid too coarse");
  auto gap_at = [&](double t) {
    double g = beta_mech(p, t, false, c) - beta_fals_of_dec(dec_of_t(p, t, true, c));
    return std::isnan(g) ? -std::numeric_limits<double>::infinity() : g;
  };
  int best = 0;
  double best_gap = -std::numeric_limits<double>::infinity();
  std::vector<double> ts(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    ts[i] = t_lo + (t_hi - t_lo) * static_cast<double>(i) / (grid_n - 1);
    double g = gap_at(ts[i]);
    if (g > best_gap) {
      best_gap = g;
      best = i;
    }
  }
  double lo = ts[std::max(best - 1, 0)];
  double hi = ts[std::min(best + 1, grid_n - 1)];
  double t_star = golden_section_maximize(gap_at, lo, hi, 1e-10);
  double g_star = gap_at(t_star);
  if (g_star < best_gap) {  // refinement may not beat a boundary grid point
    t_star = ts[best];
    g_star = best_gap;
  }
  OptimalTime out;
  out.t_max = t_star;
  out.gap = g_star;
  out.falsifiable = g_star > kGapResolution;
  return out;
}

// Default search window: one mechanical period.
inline OptimalTime optimal_time(const OptomechParams& p,
                                const PhysicalConstants& c = {}) {
  return optimal_time(p, 0.0, p.period(), 4097, c);
}

}  // namespace decobound

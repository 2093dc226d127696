#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "decobound/entropy.hpp"
#include "decobound/optimize.hpp"
#include "decobound/quantum.hpp"

// The quantum feasible region: for a measured CHSH value v in (2, 2 sqrt(2)]
// the conditional min-entropy of any compatible state obeys
// H_min(A|E) >= f(v), so the decoherence quantity is bounded by
// Dec(A|E) <= 2^{-f(v)}/2. The inner maximization of f is concave in c_z and
// is solved by golden-section search; beta_fals inverts the monotone bound by
// bisection.

namespace decobound {

// Thrown by beta_fals when the requested Dec value cannot be excluded by any
// CHSH measurement.
class NotFalsifiableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline double f_objective(double cz, double q) {
  double t1 = std::max(1.0 + cz, 0.0);
  double t2 = std::max(1.0 - cz + q, 0.0);
  double t3 = std::max(1.0 - cz - q, 0.0);
  return 2.0 * std::sqrt(t1) + std::sqrt(t2) + std::sqrt(t3);
}

inline double optimal_cz(double v) {
  const double q = v / std::sqrt(2.0);
  return golden_section_maximize([q](double cz) { return f_objective(cz, q); },
                                 -1.0, 1.0 - q, 1e-12);
}

}  // namespace detail

// f(v) = 3 - 2 log2 max_{c_z in [-1, 1 - v/sqrt(2)]}
//        (2 sqrt(1 + c_z) + sqrt(1 - c_z + v/sqrt(2)) + sqrt(1 - c_z - v/sqrt(2)))
inline double f_of_v(double v) {
  if (v <= 2.0 || v > kTwoSqrtTwo + 1e-12)
    throw std::invalid_argument("f_of_v: v must lie in (2, 2 sqrt(2)]");
  v = std::min(v, kTwoSqrtTwo);
  const double q = v / std::sqrt(2.0);
  double cz = detail::optimal_cz(v);
  return 3.0 - 2.0 * std::log2(detail::f_objective(cz, q));
}

// Tight upper bound on Dec(A|E) given a CHSH value beta. Equals 1 in the
// classical region beta <= 2, with a jump at 2.
inline double dec_bound_quantum(double beta) {
  if (beta < 0.0 || beta > kTwoSqrtTwo + 1e-12)
    throw std::invalid_argument(
        "dec_bound_quantum: beta outside [0, 2 sqrt(2)] is not quantum");
  if (beta <= 2.0) return 1.0;
  return 0.5 * std::exp2(-f_of_v(beta));
}

// Largest bound value reachable for beta > 2 (the beta -> 2+ limit).
inline double dec_bound_sup() {
  static const double value = dec_bound_quantum(2.0 + 1e-12);
  return value;
}

// Minimal CHSH value whose observation falsifies any model predicting a
// decoherence of at least dec_value. Monotone bisection of the bound curve.
inline double beta_fals(double dec_value, double tol = 1e-10) {
  if (dec_value < 0.25 - 1e-9)
    throw std::invalid_argument("beta_fals: Dec values below 1/4 are unphysical");
  if (dec_value <= 0.25 + 1e-12) return kTwoSqrtTwo;
  if (dec_value >= dec_bound_sup())
    throw NotFalsifiableError("beta_fals: not falsifiable by CHSH");
  return bisect(
      [dec_value](double b) { return dec_bound_quantum(b) - dec_value; },
      2.0 + 1e-12, kTwoSqrtTwo, tol);
}

// Bell-diagonal state attaining the bound at a given beta: correlations
// (q/2, q/2, c_z*) with q = beta/sqrt(2) and c_z* the inner maximizer.
inline BellDiagonalState extremal_bell_state(double beta) {
  if (beta <= 2.0 || beta > kTwoSqrtTwo + 1e-12)
    throw std::invalid_argument("extremal_bell_state: beta must lie in (2, 2 sqrt(2)]");
  beta = std::min(beta, kTwoSqrtTwo);
  const double q = beta / std::sqrt(2.0);
  double cz = detail::optimal_cz(beta);
  return BellDiagonalState::from_correlations({0.5 * q, 0.5 * q, cz});
}

struct RegionPoint {
  double beta;
  double dec_bound;
};

// Sampled boundary of the quantum feasible region; beta strictly increasing,
// dec bound strictly decreasing.
struct FeasibleRegionCurve {
  std::vector<RegionPoint> samples;
};

inline FeasibleRegionCurve region_curve(int n) {
  if (n < 2) throw std::invalid_argument("region_curve: n must be >= 2");
  FeasibleRegionCurve curve;
  curve.samples.reserve(n);
  const double lo = 2.0 + 1e-9;
  const double hi = kTwoSqrtTwo;
  for (int i = 0; i < n; ++i) {
    double beta = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    curve.samples.push_back({beta, dec_bound_quantum(beta)});
  }
  return curve;
}

}  // namespace decobound

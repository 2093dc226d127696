#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "decobound/quantum.hpp"

// Finite-statistics CHSH protocol: in each round the setting pair (x, y) is
// drawn uniformly, outcomes (a, b) follow the Born rule for the chosen
// observables, and the empirical CHSH value is the mean of the per-round
// variable 4 s_xy (-1)^(a xor b) with s_11 = -1 and s_xy = +1 otherwise.
//
// Randomness contract: a single std::mt19937_64 seeded with `seed`; each
// round consumes one engine word for the settings (low two bits: x then y)
// and one word for the outcome (53-bit mantissa inverse-CDF over the cells
// in index order 2a + b). Identical seeds give identical trial streams.

namespace decobound {

struct TrialRecord {
  std::uint8_t x, y, a, b;
};

struct BetaEstimate {
  double beta_hat = 0.0;
  std::int64_t n_rounds = 0;
  double confidence_radius = 0.0;
  double confidence_level = 0.0;
};

// Hoeffding radius at the given confidence level: each of the four cell
// correlators is estimated from about n/4 rounds of a +-1 variable, so
// Pr[|corr_est - corr| >= eps] <= 2 exp(-(n/4) eps^2 / 2); setting the right
// side to (1 - level) and summing the four cell deviations gives
//   radius = 4 sqrt(2 ln(2 / (1 - level)) 4 / n).
inline double hoeffding_radius(std::int64_t n, double level = 0.99) {
  if (n < 1) throw std::invalid_argument("hoeffding_radius: n must be >= 1");
  if (level <= 0.0 || level >= 1.0)
    throw std::invalid_argument("hoeffding_radius: level must be in (0, 1)");
  return 4.0 * std::sqrt(2.0 * std::log(2.0 / (1.0 - level)) * 4.0 /
                         static_cast<double>(n));
}

// Born-rule cell probabilities Pr[a, b | x, y], indexed by 2a + b.
inline std::array<double, 4> outcome_distribution(const TwoQubitState& rho,
                                                  const ChshMeasurementSet& m,
                                                  int x, int y) {
  if ((x & ~1) || (y & ~1))
    throw std::invalid_argument("outcome_distribution: settings must be bits");
  const Mat2& oa = (x == 0 ? m.a0 : m.a1).matrix();
  const Mat2& ob = (y == 0 ? m.b0 : m.b1).matrix();
  std::array<double, 4> p{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Mat2 pa = 0.5 * (Mat2::Identity() + (a == 0 ? 1.0 : -1.0) * oa);
      Mat2 pb = 0.5 * (Mat2::Identity() + (b == 0 ? 1.0 : -1.0) * ob);
      p[2 * a + b] = (kron(pa, pb) * rho.matrix()).trace().real();
    }
  return p;
}

struct RunSummary {
  BetaEstimate estimate;
  // counts[2x + y][2a + b]
  std::array<std::array<std::int64_t, 4>, 4> counts{};
};

// Runs the protocol; when `trials` is non-null every round is appended to it.
inline RunSummary run_protocol(const TwoQubitState& rho,
                               const ChshMeasurementSet& m, std::int64_t n,
                               std::uint64_t seed, double level = 0.99,
                               std::vector<TrialRecord>* trials = nullptr) {
  if (n < 1) throw std::invalid_argument("run_protocol: n must be >= 1");
  std::array<std::array<double, 4>, 4> cells;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      cells[2 * x + y] = outcome_distribution(rho, m, x, y);

  std::mt19937_64 gen(seed);
  RunSummary out;
  if (trials) trials->reserve(trials->size() + static_cast<size_t>(n));
  double sum = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    std::uint64_t w = gen();
    int x = static_cast<int>(w & 1);
    int y = static_cast<int>((w >> 1) & 1);
    double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const std::array<double, 4>& p = cells[2 * x + y];
    int cell = 0;
    double acc = p[0];
    while (cell < 3 && u >= acc) acc += p[++cell];
    ++out.counts[2 * x + y][cell];
    int a = cell >> 1, b = cell & 1;
    if (trials)
      trials->push_back({static_cast<std::uint8_t>(x),
                         static_cast<std::uint8_t>(y),
                         static_cast<std::uint8_t>(a),
                         static_cast<std::uint8_t>(b)});
    double sign = (x == 1 && y == 1) ? -1.0 : 1.0;
    sum += 4.0 * sign * (((a ^ b) == 0) ? 1.0 : -1.0);
  }
  out.estimate.beta_hat = sum / static_cast<double>(n);
  out.estimate.n_rounds = n;
  out.estimate.confidence_level = level;
  out.estimate.confidence_radius = hoeffding_radius(n, level);
  return out;
}

inline BetaEstimate simulate(const TwoQubitState& rho,
                             const ChshMeasurementSet& m, std::int64_t n,
                             std::uint64_t seed, double level = 0.99) {
  return run_protocol(rho, m, n, seed, level).estimate;
}

}  // namespace decobound

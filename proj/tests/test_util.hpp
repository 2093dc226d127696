#pragma once

#include <array>
#include <cmath>
#include <random>

#include "decobound/quantum.hpp"

namespace testutil {

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double gaussian(std::mt19937_64& gen) {
  double u1 = uniform01(gen), u2 = uniform01(gen);
  if (u1 <= 0) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// rho = G G^dag / tr, a full-rank random density matrix almost surely.
inline decobound::TwoQubitState random_state(std::mt19937_64& gen) {
  decobound::Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      g(i, j) = decobound::cplx(gaussian(gen), gaussian(gen));
  decobound::Mat4 rho = g * g.adjoint();
  rho /= rho.trace().real();
  return decobound::TwoQubitState(rho);
}

// Dirichlet(1,1,1,1) sample.
inline std::array<double, 4> random_bell_probs(std::mt19937_64& gen) {
  std::array<double, 4> p{};
  double sum = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - uniform01(gen));
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace testutil

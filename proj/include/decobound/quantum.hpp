#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "decobound/linalg.hpp"

// Two-qubit state machinery: Pauli decomposition, Bell-diagonal states,
// twirling, CHSH values and the maximal violation determined by the
// correlation tensor, plus the noise channels used for the parametric
// bound curves.

namespace decobound {

inline constexpr double kTwoSqrtTwo = 2.8284271247461903;

// Hermitian 2x2 observable with spectrum {-1, +1} (O^2 = 1).
class Observable {
 public:
  explicit Observable(const Mat2& m, double tol = 1e-9) : m_(m) {
    if (!is_hermitian(m, tol))
      throw std::invalid_argument("Observable: matrix is not Hermitian");
    if ((m * m - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-9)
      throw std::invalid_argument("Observable: matrix does not square to 1");
  }
  const Mat2& matrix() const { return m_; }

 private:
  Mat2 m_;
};

struct ChshMeasurementSet {
  Observable a0, a1, b0, b1;
};

// A_0 = X, A_1 = Z, B_0 = (X - Z)/sqrt(2), B_1 = (X + Z)/sqrt(2).
inline ChshMeasurementSet standard_chsh_measurements() {
  const double s = 1.0 / std::sqrt(2.0);
  return {Observable(pauli_x()), Observable(pauli_z()),
          Observable(s * (pauli_x() - pauli_z())),
          Observable(s * (pauli_x() + pauli_z()))};
}

// Bloch vectors of both parties plus the 3x3 correlation tensor
// T_jk = Tr[rho (sigma_j x sigma_k)] with (j, k) running over (x, y, z).
struct PauliForm {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
  Eigen::Matrix3d t;
};

// 4x4 Hermitian, unit-trace, PSD density matrix of two qubits.
class TwoQubitState {
 public:
  explicit TwoQubitState(const Mat4& rho, double tol = 1e-9) : rho_(rho) {
    if (!is_hermitian(rho, tol))
      throw std::invalid_argument("TwoQubitState: matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol ||
        std::abs(rho.trace().imag()) > tol)
      throw std::invalid_argument("TwoQubitState: trace is not 1");
    if (min_eigenvalue(rho) < -1e-10)
      throw std::invalid_argument("TwoQubitState: negative eigenvalue");
    rho_ = 0.5 * (rho_ + rho_.adjoint().eval());  // kill numerical skew
  }

  static TwoQubitState from_pauli(const PauliForm& f) {
    Mat4 rho = Mat4::Identity();
    for (int j = 0; j < 3; ++j) {
      rho += f.a(j) * kron(pauli(j), Mat2::Identity());
      rho += f.b(j) * kron(Mat2::Identity(), pauli(j));
      for (int k = 0; k < 3; ++k) rho += f.t(j, k) * kron(pauli(j), pauli(k));
    }
    return TwoQubitState(0.25 * rho);
  }

  const Mat4& matrix() const { return rho_; }

 private:
  Mat4 rho_;
};

// Probability 4-vector over the Bell basis {Phi_1..Phi_4}.
class BellDiagonalState {
 public:
  explicit BellDiagonalState(const std::array<double, 4>& p, double tol = 1e-9)
      : p_(p) {
    double sum = 0.0;
    for (double v : p_) {
      if (v < -1e-12)
        throw std::invalid_argument("BellDiagonalState: negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      throw std::invalid_argument("BellDiagonalState: probabilities do not sum to 1");
    for (double& v : p_)
      if (v < 0) v = 0;
  }

  // Correlation coefficients (c_x, c_y, c_z) of the diagonal tensor.
  Eigen::Vector3d correlations() const {
    return {p_[0] - p_[1] + p_[2] - p_[3], -p_[0] + p_[1] + p_[2] - p_[3],
            p_[0] + p_[1] - p_[2] - p_[3]};
  }

  static BellDiagonalState from_correlations(const Eigen::Vector3d& c) {
    return BellDiagonalState({0.25 * (1 + c(0) - c(1) + c(2)),
                              0.25 * (1 - c(0) + c(1) + c(2)),
                              0.25 * (1 + c(0) + c(1) - c(2)),
                              0.25 * (1 - c(0) - c(1) - c(2))});
  }

  TwoQubitState to_state() const {
    Mat4 rho = Mat4::Zero();
    for (int j = 0; j < 4; ++j)
      rho += p_[j] * (bell_vector(j) * bell_vector(j).adjoint());
    return TwoQubitState(rho);
  }

  const std::array<double, 4>& probabilities() const { return p_; }
  double operator[](int j) const { return p_[j]; }

 private:
  std::array<double, 4> p_;
};

inline PauliForm pauli_decompose(const TwoQubitState& rho) {
  PauliForm f;
  const Mat4& m = rho.matrix();
  for (int j = 0; j < 3; ++j) {
    f.a(j) = (m * kron(pauli(j), Mat2::Identity())).trace().real();
    f.b(j) = (m * kron(Mat2::Identity(), pauli(j))).trace().real();
    for (int k = 0; k < 3; ++k)
      f.t(j, k) = (m * kron(pauli(j), pauli(k))).trace().real();
  }
  return f;
}

// Random-unitary average over {1, X, Y, Z} applied to both sides. Kills the
// local Bloch vectors and the off-diagonal correlations, preserves T_jj.
inline BellDiagonalState twirl(const TwoQubitState& rho) {
  Mat4 acc = Mat4::Zero();
  const Mat2 us[4] = {Mat2::Identity(), pauli_x(), pauli_y(), pauli_z()};
  for (const Mat2& u : us) {
    Mat4 uu = kron(u, u);
    acc += uu * rho.matrix() * uu.adjoint();
  }
  acc *= 0.25;
  std::array<double, 4> p;
  for (int j = 0; j < 4; ++j)
    p[j] = (bell_vector(j).adjoint() * acc * bell_vector(j))(0).real();
  return BellDiagonalState(p);
}

inline double chsh_value(const TwoQubitState& rho, const ChshMeasurementSet& m) {
  Mat4 op = kron(m.a0.matrix(), m.b0.matrix()) +
            kron(m.a0.matrix(), m.b1.matrix()) +
            kron(m.a1.matrix(), m.b0.matrix()) -
            kron(m.a1.matrix(), m.b1.matrix());
  return (op * rho.matrix()).trace().real();
}

// Maximal CHSH value over all binary observables: 2 when s1^2 + s2^2 <= 1,
// else 2 sqrt(s1^2 + s2^2) with s1 >= s2 the two largest singular values of
// the correlation tensor.
inline double beta_max(const TwoQubitState& rho) {
  PauliForm f = pauli_decompose(rho);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(f.t);
  double s1 = svd.singularValues()(0);
  double s2 = svd.singularValues()(1);
  double q = s1 * s1 + s2 * s2;
  return q <= 1.0 ? 2.0 : 2.0 * std::sqrt(q);
}

inline double beta_max(const BellDiagonalState& p) {
  Eigen::Vector3d c = p.correlations().cwiseAbs();
  std::sort(c.data(), c.data() + 3);
  double q = c(2) * c(2) + c(1) * c(1);
  return q <= 1.0 ? 2.0 : 2.0 * std::sqrt(q);
}

// The Bell state (|01> + |10>)/sqrt(2). Its correlation tensor is
// diag(1, 1, -1), for which the standard measurement set attains 2 sqrt(2);
// all "maximally entangled" defaults in this library refer to this state.
inline TwoQubitState canonical_entangled_state() {
  return BellDiagonalState({0.0, 0.0, 1.0, 0.0}).to_state();
}

// Replaces Bob's share with white noise with probability q.
inline TwoQubitState depolarizing(const TwoQubitState& rho, double q) {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("depolarizing: q must be in [0, 1]");
  Mat4 out = (1.0 - q) * rho.matrix() +
             q * kron(partial_trace_b(rho.matrix()), 0.5 * Mat2::Identity());
  return TwoQubitState(out);
}

enum class Axis { x = 0, y = 1, z = 2 };

// Gamma(rho) = p rho + (1 - p) (1 x sigma_axis) rho (1 x sigma_axis).
inline TwoQubitState dephasing(const TwoQubitState& rho, double p,
                               Axis axis = Axis::z) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("dephasing: p must be in [0, 1]");
  Mat4 flip = kron(Mat2::Identity(), pauli(static_cast<int>(axis)));
  Mat4 out = p * rho.matrix() + (1.0 - p) * flip * rho.matrix() * flip;
  return TwoQubitState(out);
}

}  // namespace decobound

#pragma once

#include <Eigen/Dense>
#include <complex>

// Small fixed-size linear algebra helpers shared across the library.
// Two-qubit operators live on C^2 (x) C^2 with Alice as the first tensor
// factor; the computational basis index of |ab> is 2a + b.

namespace decobound {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4c = Eigen::Vector4cd;

inline Mat2 pauli_x() {
  Mat2 m;
  m << cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0);
  return m;
}

inline Mat2 pauli_y() {
  Mat2 m;
  m << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
  return m;
}

inline Mat2 pauli_z() {
  Mat2 m;
  m << cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(-1, 0);
  return m;
}

inline Mat2 pauli(int j) {
  switch (j) {
    case 0: return pauli_x();
    case 1: return pauli_y();
    default: return pauli_z();
  }
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

inline Mat2 partial_trace_a(const Mat4& m) {
  Mat2 out = Mat2::Zero();
  for (int i = 0; i < 2; ++i)
    out += m.block<2, 2>(2 * i, 2 * i);
  return out;
}

inline Mat2 partial_trace_b(const Mat4& m) {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out(i, j) = m.block<2, 2>(2 * i, 2 * j).trace();
  return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> es(m);
  return es.eigenvalues().minCoeff();
}

// |Phi_1,2> = (|00> +- |11>)/sqrt(2), |Phi_3,4> = (|01> +- |10>)/sqrt(2).
// j is 0-based.
inline Vec4c bell_vector(int j) {
  const double s = 1.0 / std::sqrt(2.0);
  Vec4c v = Vec4c::Zero();
  switch (j) {
    case 0: v(0) = s; v(3) = s; break;
    case 1: v(0) = s; v(3) = -s; break;
    case 2: v(1) = s; v(2) = s; break;
    default: v(1) = s; v(2) = -s; break;
  }
  return v;
}

// Principal square root of a PSD 2x2 matrix. Eigenvalues below zero are
// clipped at -tol; anything more negative is a caller bug.
inline Mat2 sqrt_psd2(const Mat2& m, double tol = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(m);
  Eigen::Vector2d ev = es.eigenvalues();
  Mat2 out = Mat2::Zero();
  for (int i = 0; i < 2; ++i) {
    double lam = ev(i) < 0 && ev(i) >= -tol ? 0.0 : ev(i);
    out += std::sqrt(lam) * es.eigenvectors().col(i) *
           es.eigenvectors().col(i).adjoint();
  }
  return out;
}

inline Mat4 sqrt_psd4(const Mat4& m, double tol = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  Eigen::Vector4d ev = es.eigenvalues();
  Mat4 out = Mat4::Zero();
  for (int i = 0; i < 4; ++i) {
    double lam = ev(i) < 0 && ev(i) >= -tol ? 0.0 : ev(i);
    out += std::sqrt(lam) * es.eigenvectors().col(i) *
           es.eigenvectors().col(i).adjoint();
  }
  return out;
}

}  // namespace decobound

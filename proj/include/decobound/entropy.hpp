#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "decobound/linalg.hpp"
#include "decobound/optimize.hpp"
#include "decobound/quantum.hpp"

// Closed-form max/min entropies and the decoherence quantity Dec(A|E) for
// Bell-diagonal states, together with two independent verification routes:
// a numeric maximization of the max-entropy over Bob-side states, and the
// primal/dual witness pair of the max-entropy SDP.
//
// Conventions: log is base 2; for a Bell-diagonal state with probabilities
// p over the generalized Bell basis of local dimension d,
//   H_max(A|B) = -log d + 2 log sum_j sqrt(p_j),
// H_min(A|E) = -H_max(A|B) for any purification, and
//   Dec(A|E) = 2^{-H_min} / d_A   (d_A = 2 throughout).

namespace decobound {

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_probability_vector(std::span<const double> p) {
  double sum = 0.0;
  for (double v : p) {
    if (v < -1e-12)
      throw std::invalid_argument("probability vector has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("probability vector does not sum to 1");
}

inline double sqrt_sum(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s += std::sqrt(std::max(v, 0.0));
  return s;
}

}  // namespace detail

inline double hmax_bell_diagonal(std::span<const double> p, int d) {
  if (d < 2) throw std::invalid_argument("hmax_bell_diagonal: d must be >= 2");
  detail::check_probability_vector(p);
  return -std::log2(static_cast<double>(d)) + 2.0 * std::log2(detail::sqrt_sum(p));
}

inline double hmax_bell_diagonal(const BellDiagonalState& s, int d = 2) {
  return hmax_bell_diagonal(std::span<const double>(s.probabilities()), d);
}

// H_min(A|E) of any purification of the Bell-diagonal state.
inline double hmin_dual(std::span<const double> p) {
  return -hmax_bell_diagonal(p, 2);
}

inline double hmin_dual(const BellDiagonalState& s) {
  return -hmax_bell_diagonal(s, 2);
}

// Dec(A|E) = 2^{-H_min}/2 = (1/4) (sum_j sqrt(p_j))^2, in [1/4, 1].
inline double dec_quantum(std::span<const double> p) {
  detail::check_probability_vector(p);
  double s = detail::sqrt_sum(p);
  return 0.25 * s * s;
}

inline double dec_quantum(const BellDiagonalState& s) {
  return dec_quantum(std::span<const double>(s.probabilities()));
}

// Uhlmann fidelity F(rho, sigma) = tr sqrt(sqrt(rho) sigma sqrt(rho)),
// evaluated as the nuclear norm of sqrt(rho) sqrt(sigma).
inline double fidelity(const Mat4& rho, const Mat4& sigma) {
  Mat4 m = sqrt_psd4(rho) * sqrt_psd4(sigma);
  return Eigen::JacobiSVD<Mat4>(m).singularValues().sum();
}

namespace detail {

// F^2(rho_AB, pi_A x sigma_B(r)) for a Bloch vector r, |r| <= 1.
class HmaxObjective {
 public:
  explicit HmaxObjective(const Mat4& rho) : sqrt_rho_(sqrt_psd4(rho)) {}

  double operator()(const Eigen::Vector3d& r) const {
    Mat2 sigma = 0.5 * Mat2::Identity();
    for (int j = 0; j < 3; ++j) sigma += 0.5 * r(j) * pauli(j);
    Mat4 m = sqrt_rho_ * kron((1.0 / std::sqrt(2.0)) * Mat2::Identity(),
                              sqrt_psd2(sigma));
    double f = Eigen::JacobiSVD<Mat4>(m).singularValues().sum();
    return f * f;
  }

 private:
  Mat4 sqrt_rho_;
};

}  // namespace detail

// Evaluates H_max(A|B) = max_{sigma_B} log 2 F^2(rho_AB, pi_A x sigma_B) by
// multi-start coordinate ascent over the Bloch ball. The objective is
// unimodal along lines, so golden-section line searches converge; the
// multi-start guard reports non-convergence if the two best starts end more
// than 1e-6 apart.
inline double hmax_numeric_oracle(const TwoQubitState& rho, int starts = 24) {
  if (starts < 2) throw std::invalid_argument("hmax_numeric_oracle: starts < 2");
  detail::HmaxObjective objective(rho.matrix());

  std::mt19937_64 gen(0x5eedULL);
  auto unit_interval = [&gen]() {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };

  std::vector<double> results;
  results.reserve(starts);
  for (int s = 0; s < starts; ++s) {
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    if (s > 0) {
      do {
        for (int j = 0; j < 3; ++j) r(j) = 2.0 * unit_interval() - 1.0;
      } while (r.norm() >= 1.0);
    }
    double value = objective(r);
    for (int pass = 0; pass < 200; ++pass) {
      double before = value;
      for (int j = 0; j < 3; ++j) {
        double other = 0.0;
        for (int k = 0; k < 3; ++k)
          if (k != j) other += r(k) * r(k);
        double span = std::sqrt(std::max(1.0 - other, 0.0));
        double best = golden_section_maximize(
            [&](double t) {
              Eigen::Vector3d rr = r;
              rr(j) = t;
              return objective(rr);
            },
            -span, span, 1e-9);
        r(j) = best;
      }
      value = objective(r);
      if (value - before < 1e-12) break;
    }
    results.push_back(value);
  }
  std::sort(results.begin(), results.end());
  double best = results[starts - 1];
  double second = results[starts - 2];
  double h_best = std::log2(2.0 * best);
  double h_second = std::log2(2.0 * second);
  if (h_best - h_second > 1e-6)
    throw NonConvergenceError("hmax_numeric_oracle: best two starts disagree by " +
                              std::to_string(h_best - h_second));
  return h_best;
}

// Primal/dual witness check for the max-entropy SDP on a Bell-diagonal
// state. The purification is |psi> = sum_j sqrt(p_j) |Phi_j>|j>. The primal
// witness is Z = (sum_j sqrt(p_j)) sum_k sqrt(p_k) |Phi_k><Phi_k| with value
// mu = (1/2)(sum sqrt(p))^2; the dual witness is Y = (1/2) |y><y| with
// |y> = sum_j |Phi_j>|j> and sigma_B = 1/2.
struct CertificateReport {
  bool passed = true;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double expected_value = 0.0;
  double max_residual = 0.0;
  std::vector<std::string> failures;
};

namespace detail {

using Mat16 = Eigen::Matrix<cplx, 16, 16>;
using Vec16 = Eigen::Matrix<cplx, 16, 1>;

inline Mat16 kron_ab_c(const Mat4& ab, const Mat4& c) {
  Mat16 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out.block<4, 4>(4 * i, 4 * j) = ab(i, j) * c;
  return out;
}

inline Mat4 partial_trace_c(const Mat16& m) {
  Mat4 out = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int c = 0; c < 4; ++c) out(i, j) += m(4 * i + c, 4 * j + c);
  return out;
}

}  // namespace detail

inline CertificateReport sdp_certificates_check(std::span<const double> p) {
  detail::check_probability_vector(p);
  if (p.size() != 4)
    throw std::invalid_argument("sdp_certificates_check: expected 4 probabilities");

  CertificateReport rep;
  auto record = [&rep](const std::string& name, double residual, double tol) {
    rep.max_residual = std::max(rep.max_residual, residual);
    if (residual > tol) {
      rep.passed = false;
      rep.failures.push_back(name + ": residual=" + std::to_string(residual));
    }
  };

  const double s = detail::sqrt_sum(p);
  rep.expected_value = 0.5 * s * s;

  // Purification |psi> = sum_j sqrt(p_j) |Phi_j> |j>, AB index major.
  detail::Vec16 psi = detail::Vec16::Zero();
  for (int j = 0; j < 4; ++j) {
    Vec4c phi = bell_vector(j);
    for (int ab = 0; ab < 4; ++ab) psi(4 * ab + j) = std::sqrt(p[j]) * phi(ab);
  }
  detail::Mat16 rho_abc = psi * psi.adjoint();

  Mat4 z = Mat4::Zero();
  Mat4 z_pinv = Mat4::Zero();
  Mat4 support = Mat4::Zero();
  for (int k = 0; k < 4; ++k) {
    if (p[k] <= 0.0) continue;
    Mat4 proj = bell_vector(k) * bell_vector(k).adjoint();
    z += s * std::sqrt(p[k]) * proj;
    z_pinv += 1.0 / (s * std::sqrt(p[k])) * proj;
    support += proj;
  }
  const double mu = rep.expected_value;

  // Primal feasibility.
  record("primal: Z psd", std::max(0.0, -min_eigenvalue(z)), 1e-12);
  record("primal: mu 1_B >= tr_A(Z)",
         std::max(0.0, -min_eigenvalue(Mat2(mu * Mat2::Identity() -
                                             partial_trace_a(z)))),
         1e-10);
  detail::Mat16 z_ext = detail::kron_ab_c(z, Mat4::Identity());
  detail::Mat16 support_ext = detail::kron_ab_c(support, Mat4::Identity());
  record("primal: support projector fixes psi",
         (support_ext * psi - psi).cwiseAbs().maxCoeff(), 1e-10);
  double quad =
      (psi.adjoint() * detail::kron_ab_c(z_pinv, Mat4::Identity()) * psi)(0)
          .real();
  record("primal: <psi|Zinv|psi> <= 1", std::max(0.0, quad - 1.0), 1e-10);
  record("primal: Z x 1 >= rho_ABC (eigenvalue check)",
         std::max(0.0, -min_eigenvalue(detail::Mat16(z_ext - rho_abc))), 1e-10);

  // Dual feasibility. Y = (1/2)|y><y| with |y> = sum_j |Phi_j>|j>.
  detail::Vec16 y = detail::Vec16::Zero();
  for (int j = 0; j < 4; ++j) {
    Vec4c phi = bell_vector(j);
    for (int ab = 0; ab < 4; ++ab) y(4 * ab + j) = phi(ab);
  }
  detail::Mat16 y_op = 0.5 * (y * y.adjoint());
  Mat2 sigma_b = 0.5 * Mat2::Identity();
  record("dual: Y psd", std::max(0.0, -min_eigenvalue(y_op)), 1e-12);
  Mat4 trc = detail::partial_trace_c(y_op);
  record("dual: tr_C(Y) <= 1_A x sigma_B",
         std::max(0.0, -min_eigenvalue(Mat4(kron(Mat2::Identity(), sigma_b) -
                                             trc))),
         1e-10);
  record("dual: tr sigma_B <= 1",
         std::max(0.0, sigma_b.trace().real() - 1.0), 1e-12);

  // Values: primal = dual = (1/2)(sum sqrt p)^2.
  rep.primal_value = mu;
  rep.dual_value = (rho_abc * y_op).trace().real();
  record("value: primal == expected",
         std::abs(rep.primal_value - rep.expected_value), 1e-10);
  record("value: dual == expected",
         std::abs(rep.dual_value - rep.expected_value), 1e-10);
  record("value: primal == dual", std::abs(rep.primal_value - rep.dual_value),
         1e-10);
  return rep;
}

inline CertificateReport sdp_certificates_check(const BellDiagonalState& s) {
  return sdp_certificates_check(std::span<const double>(s.probabilities()));
}

}  // namespace decobound

#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

#include "decobound/lp.hpp"

// Theory-independent bound: tripartite/bipartite no-signalling distribution
// types, the 97-variable linear program computing delta(lambda), and the
// bound Dec(A|E) <= 2^{-delta^2(lambda)} valid in any no-signalling theory.
//
// Variable layout of the linear program (all indices are bits):
//   omega[a,b,c|x,y,z]  -> a + 2b + 4c + 8x + 16y + 32z      (64 vars)
//   psi[a,c|x,z]        -> 64 + a + 2c + 4x + 8z             (16 vars)
//   slack d[a,c|x,z]    -> 80 + a + 2c + 4x + 8z             (16 vars)
//   delta               -> 96                                 (1 var)

namespace decobound {

inline constexpr int kDeltaLpVars = 97;

inline int omega_index(int a, int b, int c, int x, int y, int z) {
  return a + 2 * b + 4 * c + 8 * x + 16 * y + 32 * z;
}
inline int psi_index(int a, int c, int x, int z) {
  return 64 + a + 2 * c + 4 * x + 8 * z;
}
inline int delta_slack_index(int a, int c, int x, int z) {
  return 80 + a + 2 * c + 4 * x + 8 * z;
}
inline constexpr int kDeltaVarIndex = 96;

// Bhattacharyya coefficient sum_i sqrt(p_i q_i).
inline double classical_fidelity(std::span<const double> p,
                                 std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("classical_fidelity: length mismatch");
  double sp = 0.0, sq = 0.0, b = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < -1e-12 || q[i] < -1e-12)
      throw std::invalid_argument("classical_fidelity: negative entry");
    sp += p[i];
    sq += q[i];
    b += std::sqrt(std::max(p[i], 0.0) * std::max(q[i], 0.0));
  }
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
    throw std::invalid_argument("classical_fidelity: not normalized");
  return b;
}

// Total variation distance (1/2) sum_i |p_i - q_i|.
inline double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("tv_distance: length mismatch");
  double sp = 0.0, sq = 0.0, d = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < -1e-12 || q[i] < -1e-12)
      throw std::invalid_argument("tv_distance: negative entry");
    sp += p[i];
    sq += q[i];
    d += std::abs(p[i] - q[i]);
  }
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
    throw std::invalid_argument("tv_distance: not normalized");
  return 0.5 * d;
}

// Tripartite conditional distribution Pr[a,b,c|x,y,z] with one-party
// no-signalling in every direction.
class NsDist3 {
 public:
  explicit NsDist3(const std::array<double, 64>& pr, double tol = 1e-9)
      : pr_(pr) {
    validate(tol);
  }

  double operator()(int a, int b, int c, int x, int y, int z) const {
    return pr_[omega_index(a, b, c, x, y, z)];
  }

  // Eve-side marginal sum_b Pr[a,b,c|x,y,z].
  double ae_marginal(int a, int c, int x, int y, int z) const {
    return (*this)(a, 0, c, x, y, z) + (*this)(a, 1, c, x, y, z);
  }

  // Winning probability of the CHSH game a xor b = xy under uniform
  // settings, evaluated at Eve setting z.
  double chsh_winning(int z) const {
    double w = 0.0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            if ((a ^ b) != (x & y)) continue;
            for (int c = 0; c < 2; ++c) w += 0.25 * (*this)(a, b, c, x, y, z);
          }
    return w;
  }

  const std::array<double, 64>& raw() const { return pr_; }

 private:
  void validate(double tol) const {
    for (double v : pr_)
      if (v < -tol || v > 1.0 + tol)
        throw std::invalid_argument("NsDist3: entry outside [0, 1]");
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z) {
          double s = 0.0;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int c = 0; c < 2; ++c) s += (*this)(a, b, c, x, y, z);
          if (std::abs(s - 1.0) > tol)
            throw std::invalid_argument("NsDist3: not normalized");
        }
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int y = 0; y < 2; ++y)
          for (int z = 0; z < 2; ++z) {
            double d = 0.0;
            for (int a = 0; a < 2; ++a)
              d += (*this)(a, b, c, 0, y, z) - (*this)(a, b, c, 1, y, z);
            if (std::abs(d) > tol)
              throw std::invalid_argument("NsDist3: Alice signals");
          }
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        for (int x = 0; x < 2; ++x)
          for (int z = 0; z < 2; ++z) {
            double d = 0.0;
            for (int b = 0; b < 2; ++b)
              d += (*this)(a, b, c, x, 0, z) - (*this)(a, b, c, x, 1, z);
            if (std::abs(d) > tol)
              throw std::invalid_argument("NsDist3: Bob signals");
          }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) {
            double d = 0.0;
            for (int c = 0; c < 2; ++c)
              d += (*this)(a, b, c, x, y, 0) - (*this)(a, b, c, x, y, 1);
            if (std::abs(d) > tol)
              throw std::invalid_argument("NsDist3: Eve signals");
          }
  }

  std::array<double, 64> pr_;
};

// Bipartite conditional distribution Pr[a,c|x,z] with no-signalling.
class NsDist2 {
 public:
  explicit NsDist2(const std::array<double, 16>& pr, double tol = 1e-9)
      : pr_(pr) {
    validate(tol);
  }

  double operator()(int a, int c, int x, int z) const {
    return pr_[(psi_index(a, c, x, z) - 64)];
  }

  const std::array<double, 16>& raw() const { return pr_; }

 private:
  void validate(double tol) const {
    for (double v : pr_)
      if (v < -tol || v > 1.0 + tol)
        throw std::invalid_argument("NsDist2: entry outside [0, 1]");
    for (int x = 0; x < 2; ++x)
      for (int z = 0; z < 2; ++z) {
        double s = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int c = 0; c < 2; ++c) s += (*this)(a, c, x, z);
        if (std::abs(s - 1.0) > tol)
          throw std::invalid_argument("NsDist2: not normalized");
      }
    for (int c = 0; c < 2; ++c)
      for (int z = 0; z < 2; ++z) {
        double d = 0.0;
        for (int a = 0; a < 2; ++a)
          d += (*this)(a, c, 0, z) - (*this)(a, c, 1, z);
        if (std::abs(d) > tol)
          throw std::invalid_argument("NsDist2: Alice signals");
      }
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < 2; ++x) {
        double d = 0.0;
        for (int c = 0; c < 2; ++c)
          d += (*this)(a, c, x, 0) - (*this)(a, c, x, 1);
        if (std::abs(d) > tol)
          throw std::invalid_argument("NsDist2: Eve signals");
      }
  }

  std::array<double, 16> pr_;
};

struct DeltaLpOptions {
  // The CHSH-winning constraint is imposed at this Eve setting and the
  // slack constraints use this Bob setting; no-signalling makes both
  // choices immaterial, which the tests assert.
  int chsh_z = 0;
  int slack_y = 0;
};

// The delta(lambda) program: minimize delta subject to omega being a
// no-signalling tripartite distribution with CHSH winning probability at
// least lambda, psi a perfectly-same-setting-correlated no-signalling
// bipartite distribution, and delta dominating the (x,z)-wise total
// variation between psi and omega's Alice-Eve marginal.
inline LpProblem build_delta_lp(double lambda, const DeltaLpOptions& opt = {}) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("build_delta_lp: lambda must be in [0, 1]");

  LpProblem prob(kDeltaLpVars);
  prob.objective(kDeltaVarIndex) = 1.0;
  auto row = [] { return Eigen::VectorXd::Zero(kDeltaLpVars); };

  // omega normalization, 8 rows.
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        Eigen::VectorXd r = row();
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) r(omega_index(a, b, c, x, y, z)) = 1.0;
        prob.add_eq(r, 1.0);
      }
  // omega no-signalling: Alice (16), Bob (16), Eve (16).
  for (int b = 0; b < 2; ++b)
    for (int c = 0; c < 2; ++c)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z) {
          Eigen::VectorXd r = row();
          for (int a = 0; a < 2; ++a) {
            r(omega_index(a, b, c, 0, y, z)) += 1.0;
            r(omega_index(a, b, c, 1, y, z)) -= 1.0;
          }
          prob.add_eq(r, 0.0);
        }
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) {
          Eigen::VectorXd r = row();
          for (int b = 0; b < 2; ++b) {
            r(omega_index(a, b, c, x, 0, z)) += 1.0;
            r(omega_index(a, b, c, x, 1, z)) -= 1.0;
          }
          prob.add_eq(r, 0.0);
        }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          Eigen::VectorXd r = row();
          for (int c = 0; c < 2; ++c) {
            r(omega_index(a, b, c, x, y, 0)) += 1.0;
            r(omega_index(a, b, c, x, y, 1)) -= 1.0;
          }
          prob.add_eq(r, 0.0);
        }
  // CHSH winning probability >= lambda at z = chsh_z.
  {
    Eigen::VectorXd r = row();
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            if ((a ^ b) != (x & y)) continue;
            for (int c = 0; c < 2; ++c)
              r(omega_index(a, b, c, x, y, opt.chsh_z)) = 0.25;
          }
    prob.add_ge(r, lambda);
  }
  // psi normalization (4) and no-signalling (4 + 4).
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z) {
      Eigen::VectorXd r = row();
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) r(psi_index(a, c, x, z)) = 1.0;
      prob.add_eq(r, 1.0);
    }
  for (int c = 0; c < 2; ++c)
    for (int z = 0; z < 2; ++z) {
      Eigen::VectorXd r = row();
      for (int a = 0; a < 2; ++a) {
        r(psi_index(a, c, 0, z)) += 1.0;
        r(psi_index(a, c, 1, z)) -= 1.0;
      }
      prob.add_eq(r, 0.0);
    }
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) {
      Eigen::VectorXd r = row();
      for (int c = 0; c < 2; ++c) {
        r(psi_index(a, c, x, 0)) += 1.0;
        r(psi_index(a, c, x, 1)) -= 1.0;
      }
      prob.add_eq(r, 0.0);
    }
  // Perfect correlation Pr[a=c|x=z] = 1 for x = z in {0, 1}.
  for (int s = 0; s < 2; ++s) {
    Eigen::VectorXd r = row();
    r(psi_index(0, 0, s, s)) = 1.0;
    r(psi_index(1, 1, s, s)) = 1.0;
    prob.add_eq(r, 1.0);
  }
  // d[a,c|x,z] >= +-(1/2)(psi[a,c|x,z] - sum_b omega[a,b,c|x,slack_y,z]).
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) {
          for (int sign : {+1, -1}) {
            Eigen::VectorXd r = row();
            r(psi_index(a, c, x, z)) = 0.5 * sign;
            for (int b = 0; b < 2; ++b)
              r(omega_index(a, b, c, x, opt.slack_y, z)) = -0.5 * sign;
            r(delta_slack_index(a, c, x, z)) = -1.0;
            prob.add_le(r, 0.0);
          }
        }
  // delta >= sum_ac d[a,c|x,z] for every (x, z).
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z) {
      Eigen::VectorXd r = row();
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) r(delta_slack_index(a, c, x, z)) = 1.0;
      r(kDeltaVarIndex) = -1.0;
      prob.add_le(r, 0.0);
    }
  return prob;
}

inline double delta_of_lambda(double lambda, const DeltaLpOptions& opt = {}) {
  LpSolution sol = lp_solve(build_delta_lp(lambda, opt));
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("delta_of_lambda: LP did not reach an optimum");
  return sol.value;
}

// Variant minimizing over the setting pair (x, z) instead of taking the
// worst one: four programs, each with objective sum_ac d[a,c|x,z] for a
// fixed pair, of which the minimum is returned. Exposed for comparison with
// the canonical program; it is a strictly weaker bound.
inline double delta_of_lambda_min_xz(double lambda) {
  double best = std::numeric_limits<double>::infinity();
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z) {
      LpProblem prob = build_delta_lp(lambda);
      prob.objective.setZero();
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
          prob.objective(delta_slack_index(a, c, x, z)) = 1.0;
      LpSolution sol = lp_solve(prob);
      if (sol.status != LpStatus::optimal)
        throw std::runtime_error("delta_of_lambda_min_xz: LP failure");
      best = std::min(best, sol.value);
    }
  return best;
}

// Dec(A|E) <= 2^{-delta^2(lambda)}; trivial (= 1) for lambda <= 3/4.
inline double gpt_dec_bound(double lambda) {
  double d = delta_of_lambda(lambda);
  return std::exp2(-d * d);
}

// CHSH winning probability from the CHSH value: lambda = 1/2 + beta/8.
inline double lambda_from_beta(double beta) {
  if (beta < -4.0 || beta > 4.0)
    throw std::invalid_argument("lambda_from_beta: beta must be in [-4, 4]");
  return 0.5 + beta / 8.0;
}

// Distribution views over a solved delta LP assignment.
inline NsDist3 omega_from_solution(const Eigen::VectorXd& x, double tol = 1e-9) {
  std::array<double, 64> pr{};
  for (int i = 0; i < 64; ++i) pr[i] = x(i);
  return NsDist3(pr, tol);
}

inline NsDist2 psi_from_solution(const Eigen::VectorXd& x, double tol = 1e-9) {
  std::array<double, 16> pr{};
  for (int i = 0; i < 16; ++i) pr[i] = x(64 + i);
  return NsDist2(pr, tol);
}

}  // namespace decobound

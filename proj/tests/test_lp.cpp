#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <vector>

#include "decobound/lp.hpp"
#include "test_util.hpp"

using namespace decobound;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Brute-force LP oracle: enumerate all intersections of n active constraints
// (nonnegativity planes and <= rows), keep the feasible ones, and take the
// best objective value. Valid for bounded feasible regions.
double brute_force_min(const Eigen::VectorXd& c, const Eigen::MatrixXd& a,
                       const Eigen::VectorXd& b) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  const int total = n + m;
  std::vector<int> pick(n);
  double best = std::numeric_limits<double>::infinity();

  std::function<void(int, int)> enumerate = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd sys(n, n);
      Eigen::VectorXd rhs(n);
      for (int i = 0; i < n; ++i) {
        if (pick[i] < n) {
          sys.row(i).setZero();
          sys(i, pick[i]) = 1.0;
          rhs(i) = 0.0;
        } else {
          sys.row(i) = a.row(pick[i] - n);
          rhs(i) = b(pick[i] - n);
        }
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
      if (!lu.isInvertible()) return;
      Eigen::VectorXd x = lu.solve(rhs);
      if ((x.array() < -1e-9).any()) return;
      if (((a * x - b).array() > 1e-9).any()) return;
      best = std::min(best, c.dot(x));
      return;
    }
    for (int i = start; i < total; ++i) {
      pick[depth] = i;
      enumerate(i + 1, depth + 1);
    }
  };
  enumerate(0, 0);
  return best;
}

}  // namespace

TEST_CASE("lp basics") {
  {  // minimize x subject to x >= 3, x <= 10
    LpProblem p(1);
    p.objective = vec({1});
    p.add_ge(vec({1}), 3);
    p.add_le(vec({1}), 10);
    LpSolution s = lp_solve(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == Catch::Approx(3.0).margin(1e-9));
    CHECK(s.max_residual <= 1e-9);
  }
  {  // minimize x + y subject to x + y = 1
    LpProblem p(2);
    p.objective = vec({1, 1});
    p.add_eq(vec({1, 1}), 1);
    LpSolution s = lp_solve(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("lp infeasible and unbounded detection") {
  {
    LpProblem p(1);
    p.objective = vec({1});
    p.add_ge(vec({1}), 3);
    p.add_le(vec({1}), 1);
    CHECK(lp_solve(p).status == LpStatus::infeasible);
  }
  {
    LpProblem p(1);
    p.objective = vec({-1});
    CHECK(lp_solve(p).status == LpStatus::unbounded);
  }
  {  // contradictory bounds
    LpProblem p(1);
    p.lower(0) = 2.0;
    p.upper(0) = 1.0;
    CHECK(lp_solve(p).status == LpStatus::infeasible);
  }
}

TEST_CASE("lp variable bounds") {
  {  // shifted lower bound
    LpProblem p(1);
    p.objective = vec({1});
    p.lower(0) = -5.0;
    LpSolution s = lp_solve(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == Catch::Approx(-5.0).margin(1e-9));
  }
  {  // maximize via negated objective with an upper bound
    LpProblem p(1);
    p.objective = vec({-1});
    p.upper(0) = 7.0;
    LpSolution s = lp_solve(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.x(0) == Catch::Approx(7.0).margin(1e-9));
  }
  {  // flipped variable: only an upper bound, no lower
    LpProblem p(1);
    p.objective = vec({-1});
    p.lower(0) = -std::numeric_limits<double>::infinity();
    p.upper(0) = 4.0;
    LpSolution s = lp_solve(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == Catch::Approx(-4.0).margin(1e-9));
  }
  {  // free variable split: min x + y, x free with x + y >= 2, x <= 1
    LpProblem p(2);
    p.objective = vec({1, 1});
    p.lower(0) = -std::numeric_limits<double>::infinity();
    p.add_ge(vec({1, 1}), 2);
    p.add_le(vec({1, 0}), 1);
    LpSolution s = lp_solve(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.value == Catch::Approx(2.0).margin(1e-9));
  }
}

TEST_CASE("lp survives the classic cycling example") {
  // Beale's degenerate problem; Dantzig pivoting cycles on it.
  LpProblem p(4);
  p.objective = vec({-0.75, 150, -0.02, 6});
  p.add_le(vec({0.25, -60, -0.04, 9}), 0);
  p.add_le(vec({0.5, -90, -0.02, 3}), 0);
  p.add_le(vec({0, 0, 1, 0}), 1);
  LpSolution s = lp_solve(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.value == Catch::Approx(-0.05).margin(1e-9));
}

TEST_CASE("lp agrees with brute-force vertex enumeration") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(gen() % 4);
    int m = 1 + static_cast<int>(gen() % 4);
    Eigen::MatrixXd a(m + 1, n);
    Eigen::VectorXd b(m + 1), c(n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j)
        a(i, j) = 2.0 * testutil::uniform01(gen) - 1.0;
      b(i) = 0.5 + 1.5 * testutil::uniform01(gen);
    }
    a.row(m).setOnes();  // sum x <= 10 keeps the region bounded
    b(m) = 10.0;
    for (int j = 0; j < n; ++j) c(j) = 2.0 * testutil::uniform01(gen) - 1.0;

    LpProblem p(n);
    p.objective = c;
    for (int i = 0; i <= m; ++i) p.add_le(a.row(i), b(i));
    LpSolution s = lp_solve(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.max_residual <= 1e-9);
    double reference = brute_force_min(c, a, b);
    CHECK(s.value == Catch::Approx(reference).margin(1e-8));
  }
}

TEST_CASE("lp rejects malformed rows") {
  LpProblem p(2);
  CHECK_THROWS_AS(p.add_eq(vec({1}), 0), std::invalid_argument);
}

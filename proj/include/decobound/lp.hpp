#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

// Dense two-phase simplex with Bland's rule. Problems in this library are
// tiny (about a hundred variables and rows), so a full-tableau method with
// anti-cycling pivoting is simpler and easier to certify than anything
// sparse or interior-point.

namespace decobound {

enum class LpStatus { optimal, infeasible, unbounded };

// minimize objective . x  subject to
//   eq rows:  a . x  = b
//   le rows:  a . x <= b   (add_ge stores the negated row)
//   lower <= x <= upper    (defaults 0 and +inf)
class LpProblem {
 public:
  explicit LpProblem(int num_vars)
      : objective(Eigen::VectorXd::Zero(num_vars)),
        lower(Eigen::VectorXd::Zero(num_vars)),
        upper(Eigen::VectorXd::Constant(num_vars,
                                        std::numeric_limits<double>::infinity())) {}

  int num_vars() const { return static_cast<int>(objective.size()); }

  void add_eq(const Eigen::VectorXd& row, double rhs) {
    check_row(row);
    eq_rows_.push_back(row);
    eq_rhs_.push_back(rhs);
  }
  void add_le(const Eigen::VectorXd& row, double rhs) {
    check_row(row);
    le_rows_.push_back(row);
    le_rhs_.push_back(rhs);
  }
  void add_ge(const Eigen::VectorXd& row, double rhs) { add_le(-row, -rhs); }

  const std::vector<Eigen::VectorXd>& eq_rows() const { return eq_rows_; }
  const std::vector<double>& eq_rhs() const { return eq_rhs_; }
  const std::vector<Eigen::VectorXd>& le_rows() const { return le_rows_; }
  const std::vector<double>& le_rhs() const { return le_rhs_; }

  Eigen::VectorXd objective;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

 private:
  void check_row(const Eigen::VectorXd& row) const {
    if (row.size() != objective.size())
      throw std::invalid_argument("LpProblem: row length mismatch");
    if (!row.allFinite())
      throw std::invalid_argument("LpProblem: non-finite row entry");
  }

  std::vector<Eigen::VectorXd> eq_rows_;
  std::vector<double> eq_rhs_;
  std::vector<Eigen::VectorXd> le_rows_;
  std::vector<double> le_rhs_;
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double value = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd x;
  double max_residual = 0.0;
};

namespace detail {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-10;
constexpr double kFeasibilityTol = 1e-8;
constexpr int kMaxIterations = 200000;

class SimplexTableau {
 public:
  // `a` is m x n, rhs >= 0 is required by the caller.
  SimplexTableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs)
      : m_(static_cast<int>(a.rows())),
        n_(static_cast<int>(a.cols())),
        rhs_col_(n_ + m_) {
    tab_.resize(m_, n_ + m_ + 1);
    tab_.setZero();
    tab_.block(0, 0, m_, n_) = a;
    tab_.block(0, n_, m_, m_) = Eigen::MatrixXd::Identity(m_, m_);
    tab_.col(rhs_col_) = rhs;
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
    allowed_.assign(rhs_col_, true);
  }

  // Bland's rule: entering = lowest eligible index, leaving = lowest basic
  // index among minimal ratios. Returns false when no entering column
  // exists (current basis optimal), throws on unboundedness.
  bool pivot_step(const Eigen::VectorXd& costs) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) y(i) = costs(basis_[i]);

    int entering = -1;
    for (int j = 0; j < rhs_col_; ++j) {
      if (!allowed_[j] || is_basic(j)) continue;
      double reduced = costs(j) - y.dot(tab_.col(j));
      if (reduced < -kReducedCostTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return false;

    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m_; ++i) {
      double aij = tab_(i, entering);
      if (aij <= kPivotTol) continue;
      double ratio = tab_(i, rhs_col_) / aij;
      if (leaving < 0 || ratio < best_ratio - 1e-12 ||
          (std::abs(ratio - best_ratio) <= 1e-12 &&
           basis_[i] < basis_[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving < 0)
      throw std::overflow_error("simplex: unbounded");
    pivot(leaving, entering);
    return true;
  }

  double run(const Eigen::VectorXd& costs) {
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      if (!pivot_step(costs)) {
        double value = 0.0;
        for (int i = 0; i < m_; ++i)
          value += costs(basis_[i]) * tab_(i, rhs_col_);
        return value;
      }
    }
    throw std::runtime_error("simplex: iteration limit exceeded");
  }

  // Removes artificials from the basis after phase 1; rows that cannot be
  // repaired are linearly dependent and get dropped.
  void eliminate_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int pivot_col = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(tab_(i, j)) > 1e-8 && !is_basic(j)) {
          pivot_col = j;
          break;
        }
      }
      if (pivot_col >= 0) {
        pivot(i, pivot_col);
      } else {
        drop_row(i);
        --i;
      }
    }
    for (int j = n_; j < rhs_col_; ++j) allowed_[j] = false;
  }

  Eigen::VectorXd solution(int n_structural) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_structural);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_structural) x(basis_[i]) = tab_(i, rhs_col_);
    return x;
  }

 private:
  bool is_basic(int j) const {
    for (int b : basis_)
      if (b == j) return true;
    return false;
  }

  void pivot(int row, int col) {
    tab_.row(row) /= tab_(row, col);
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      double factor = tab_(i, col);
      if (factor != 0.0) tab_.row(i) -= factor * tab_.row(row);
    }
    basis_[row] = col;
  }

  void drop_row(int row) {
    int last = m_ - 1;
    if (row != last) {
      tab_.row(row).swap(tab_.row(last));
      std::swap(basis_[row], basis_[last]);
    }
    tab_.conservativeResize(last, Eigen::NoChange);
    basis_.resize(last);
    m_ = last;
  }

  int m_;
  int n_;
  int rhs_col_;
  Eigen::MatrixXd tab_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
};

// Variable transform to nonnegative standard form: x = shift + sign * x'
// (or a split pair for free variables).
struct VarMap {
  int col = -1;        // primary column
  int neg_col = -1;    // second column of a free split
  double shift = 0.0;
  double sign = 1.0;
};

}  // namespace detail

inline LpSolution lp_solve(const LpProblem& prob) {
  const int n = prob.num_vars();
  const double inf = std::numeric_limits<double>::infinity();

  LpSolution out;
  for (int i = 0; i < n; ++i)
    if (prob.lower(i) > prob.upper(i)) return out;  // infeasible

  // Assign transformed columns.
  std::vector<detail::VarMap> map(n);
  int cols = 0;
  for (int i = 0; i < n; ++i) {
    if (prob.lower(i) > -inf) {
      map[i] = {cols++, -1, prob.lower(i), 1.0};
    } else if (prob.upper(i) < inf) {
      map[i] = {cols++, -1, prob.upper(i), -1.0};
    } else {
      map[i] = {cols, cols + 1, 0.0, 1.0};
      cols += 2;
    }
  }

  // Gather rows: equalities first, then <= rows (incl. finite upper bounds
  // of variables that also have a finite lower bound), each with a slack.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  std::vector<bool> is_eq;
  auto transform_row = [&](const Eigen::VectorXd& row, double b) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(cols);
    double bb = b;
    for (int i = 0; i < n; ++i) {
      if (row(i) == 0.0) continue;
      bb -= row(i) * map[i].shift;
      r(map[i].col) += row(i) * map[i].sign;
      if (map[i].neg_col >= 0) r(map[i].neg_col) -= row(i);
    }
    rows.push_back(std::move(r));
    rhs.push_back(bb);
  };
  for (size_t k = 0; k < prob.eq_rows().size(); ++k) {
    transform_row(prob.eq_rows()[k], prob.eq_rhs()[k]);
    is_eq.push_back(true);
  }
  for (size_t k = 0; k < prob.le_rows().size(); ++k) {
    transform_row(prob.le_rows()[k], prob.le_rhs()[k]);
    is_eq.push_back(false);
  }
  for (int i = 0; i < n; ++i) {
    if (prob.lower(i) > -inf && prob.upper(i) < inf) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(cols);
      row(map[i].col) = 1.0;
      rows.push_back(std::move(row));
      rhs.push_back(prob.upper(i) - prob.lower(i));
      is_eq.push_back(false);
    }
  }

  const int n_slack = static_cast<int>(
      std::count(is_eq.begin(), is_eq.end(), false));
  const int m = static_cast<int>(rows.size());
  const int n_total = cols + n_slack;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n_total);
  Eigen::VectorXd b(m);
  int slack = 0;
  for (int i = 0; i < m; ++i) {
    a.row(i).head(cols) = rows[i];
    b(i) = rhs[i];
    if (!is_eq[i]) a(i, cols + slack++) = 1.0;
    if (b(i) < 0) {
      a.row(i) = -a.row(i);
      b(i) = -b(i);
    }
  }

  detail::SimplexTableau tableau(a, b);

  // Phase 1: minimize the sum of artificials.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n_total + m);
  phase1.tail(m).setOnes();
  double infeasibility = 0.0;
  try {
    infeasibility = tableau.run(phase1);
  } catch (const std::overflow_error&) {
    // Phase-1 objective is bounded below by 0; treat as solver failure.
    throw std::runtime_error("simplex: phase 1 reported unbounded");
  }
  if (infeasibility > detail::kFeasibilityTol) return out;  // infeasible
  tableau.eliminate_artificials();

  // Phase 2: original costs on the transformed variables.
  Eigen::VectorXd costs = Eigen::VectorXd::Zero(n_total + m);
  for (int i = 0; i < n; ++i) {
    costs(map[i].col) += prob.objective(i) * map[i].sign;
    if (map[i].neg_col >= 0) costs(map[i].neg_col) -= prob.objective(i);
  }
  try {
    tableau.run(costs);
  } catch (const std::overflow_error&) {
    out.status = LpStatus::unbounded;
    return out;
  }

  Eigen::VectorXd xt = tableau.solution(cols);
  out.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    out.x(i) = map[i].shift + map[i].sign * xt(map[i].col);
    if (map[i].neg_col >= 0) out.x(i) -= xt(map[i].neg_col);
  }
  out.value = prob.objective.dot(out.x);

  double res = 0.0;
  for (size_t k = 0; k < prob.eq_rows().size(); ++k)
    res = std::max(res, std::abs(prob.eq_rows()[k].dot(out.x) - prob.eq_rhs()[k]));
  for (size_t k = 0; k < prob.le_rows().size(); ++k)
    res = std::max(res, prob.le_rows()[k].dot(out.x) - prob.le_rhs()[k]);
  for (int i = 0; i < n; ++i) {
    if (prob.lower(i) > -inf) res = std::max(res, prob.lower(i) - out.x(i));
    if (prob.upper(i) < inf) res = std::max(res, out.x(i) - prob.upper(i));
  }
  out.max_residual = std::max(res, 0.0);
  out.status = LpStatus::optimal;
  return out;
}

}  // namespace decobound

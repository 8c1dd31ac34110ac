#include "lpdual/lp.hpp"

#include "lpdual/errors.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace lpdual {

namespace {

using Rational = boost::multiprecision::mpq_rational;

template <class T>
struct Tolerances;

template <>
struct Tolerances<double> {
  static double pivot() { return 1e-11; }
  static double cost() { return 1e-11; }
};

template <>
struct Tolerances<Rational> {
  static Rational pivot() { return Rational(0); }
  static Rational cost() { return Rational(0); }
};

template <class T>
struct Phase1Outcome {
  T infeasibility;             // optimal artificial value a*
  std::vector<T> x;            // basic solution restricted to the original variables
  std::vector<T> multipliers;  // reduced costs of the slacks
  long pivots = 0;
};

// Phase 1 for A x <= b, x >= 0: maximize -a over [A, -1] [x; a] <= b with a
// compact tableau over nonbasic columns. Row i reads
//   x_B(i) + sum_j D(i, j) x_N(j) = D(i, rhs),
// and the last row is the objective z = -a written the same way.
template <class T>
class Phase1 {
 public:
  Phase1(const std::vector<std::vector<T>>& a, const std::vector<T>& b, int vars)
      : m_(static_cast<int>(a.size())), n_(vars), cols_(vars + 2), d_(static_cast<size_t>((m_ + 1) * cols_)) {
    basic_.resize(static_cast<size_t>(m_));
    nonbasic_.resize(static_cast<size_t>(n_ + 1));
    for (int j = 0; j <= n_; ++j) nonbasic_[static_cast<size_t>(j)] = j;
    for (int i = 0; i < m_; ++i) {
      basic_[static_cast<size_t>(i)] = n_ + 1 + i;
      for (int j = 0; j < n_; ++j) at(i, j) = a[static_cast<size_t>(i)][static_cast<size_t>(j)];
      at(i, n_) = T(-1);
      at(i, n_ + 1) = b[static_cast<size_t>(i)];
    }
    at(m_, n_) = T(1);
  }

  Phase1Outcome<T> run(long max_pivots, int degenerate_switch, bool bland_only) {
    Phase1Outcome<T> out;
    int start = -1;
    for (int i = 0; i < m_; ++i) {
      if (at(i, n_ + 1) < T(0) && (start < 0 || at(i, n_ + 1) < at(start, n_ + 1))) start = i;
    }
    if (start >= 0) {
      pivot(start, n_);
      ++out.pivots;
    }
    bool bland = bland_only;
    int degenerate_streak = 0;
    while (true) {
      const int s = entering(bland);
      if (s < 0) break;
      const int r = leaving(s);
      if (r < 0) throw SolverError("lp_solve: phase-1 objective unbounded (numerical breakdown)");
      if (at(r, n_ + 1) == T(0) || (!bland && abs_value(at(r, n_ + 1)) <= Tolerances<T>::pivot())) {
        if (++degenerate_streak >= degenerate_switch) bland = true;
      } else {
        degenerate_streak = 0;
      }
      pivot(r, s);
      if (++out.pivots > max_pivots) {
        std::ostringstream msg;
        msg << "lp_solve: cycling guard exceeded after " << out.pivots << " pivots (" << m_ << " rows, " << n_
            << " columns)";
        throw SolverError(msg.str());
      }
    }
    out.infeasibility = -at(m_, n_ + 1);
    out.x.assign(static_cast<size_t>(n_), T(0));
    for (int i = 0; i < m_; ++i) {
      const int var = basic_[static_cast<size_t>(i)];
      if (var < n_) out.x[static_cast<size_t>(var)] = at(i, n_ + 1);
    }
    out.multipliers.assign(static_cast<size_t>(m_), T(0));
    for (int j = 0; j <= n_; ++j) {
      const int var = nonbasic_[static_cast<size_t>(j)];
      if (var > n_) out.multipliers[static_cast<size_t>(var - n_ - 1)] = at(m_, j);
    }
    return out;
  }

 private:
  T& at(int i, int j) { return d_[static_cast<size_t>(i * cols_ + j)]; }

  static T abs_value(const T& v) { return v < T(0) ? T(-v) : v; }

  int entering(bool bland) {
    int best = -1;
    for (int j = 0; j <= n_; ++j) {
      if (!(at(m_, j) < -Tolerances<T>::cost())) continue;
      if (best < 0) {
        best = j;
      } else if (bland ? nonbasic_[static_cast<size_t>(j)] < nonbasic_[static_cast<size_t>(best)]
                       : at(m_, j) < at(m_, best)) {
        best = j;
      }
    }
    return best;
  }

  int leaving(int s) {
    int best = -1;
    T best_ratio{};
    for (int i = 0; i < m_; ++i) {
      if (!(at(i, s) > Tolerances<T>::pivot())) continue;
      T ratio = at(i, n_ + 1) / at(i, s);
      if (best < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basic_[static_cast<size_t>(i)] < basic_[static_cast<size_t>(best)])) {
        best = i;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  void pivot(int r, int s) {
    const T inv = T(1) / at(r, s);
    for (int i = 0; i <= m_; ++i) {
      if (i == r || at(i, s) == T(0)) continue;
      const T factor = at(i, s) * inv;
      for (int j = 0; j < cols_; ++j) {
        if (j != s) at(i, j) -= factor * at(r, j);
      }
      at(i, s) = -factor;
    }
    for (int j = 0; j < cols_; ++j) {
      if (j != s) at(r, j) *= inv;
    }
    at(r, s) = inv;
    std::swap(basic_[static_cast<size_t>(r)], nonbasic_[static_cast<size_t>(s)]);
  }

  int m_, n_, cols_;
  std::vector<T> d_;
  std::vector<int> basic_, nonbasic_;
};

struct Stacked {
  Eigen::MatrixXd a;  // [A_ub; -A_lb]
  Eigen::VectorXd b;  // [b_ub; -b_lb]
};

Stacked stack_rows(const LpProblem& pr) {
  const int n = pr.variables();
  const auto up = pr.a_ub.rows(), lo = pr.a_lb.rows();
  Stacked s{Eigen::MatrixXd(up + lo, n), Eigen::VectorXd(up + lo)};
  if (up > 0) {
    s.a.topRows(up) = pr.a_ub;
    s.b.head(up) = pr.b_ub;
  }
  if (lo > 0) {
    s.a.bottomRows(lo) = -pr.a_lb;
    s.b.tail(lo) = -pr.b_lb;
  }
  return s;
}

template <class T>
Phase1Outcome<T> solve_as(const Stacked& s, const LpOptions& options, bool bland_only) {
  const int m = static_cast<int>(s.a.rows()), n = static_cast<int>(s.a.cols());
  std::vector<std::vector<T>> a(static_cast<size_t>(m), std::vector<T>(static_cast<size_t>(n)));
  std::vector<T> b(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = T(s.a(i, j));
    b[static_cast<size_t>(i)] = T(s.b[i]);
  }
  const long cap = options.max_pivots > 0 ? options.max_pivots : 50L * (m + n + 1);
  return Phase1<T>(a, b, n).run(cap, options.degenerate_switch, bland_only);
}

double to_double(double v) { return v; }
double to_double(const Rational& v) { return v.convert_to<double>(); }

// Fills and verifies the LpResult from a phase-1 outcome; returns false when
// the verification fails.
template <class T>
bool assemble(const LpProblem& pr, const Stacked& s, const Phase1Outcome<T>& out, bool feasible, double tol,
              LpResult& result) {
  const int n = static_cast<int>(s.a.cols());
  const auto up = pr.a_ub.rows();
  result.feasible = feasible;
  result.pivots = out.pivots;
  if (feasible) {
    result.point.resize(n);
    for (int j = 0; j < n; ++j) result.point[j] = std::max(0.0, to_double(out.x[static_cast<size_t>(j)]));
    const Eigen::VectorXd slack = s.b - s.a * result.point;
    result.residual = s.a.rows() > 0 ? std::max(0.0, -slack.minCoeff()) : 0.0;
    result.y_ub.resize(0);
    result.y_lb.resize(0);
    result.farkas_value = 0.0;
    return result.residual <= tol;
  }
  Eigen::VectorXd y(s.a.rows());
  T total(0);
  for (const auto& v : out.multipliers) total += v;
  if (!(total > T(0))) return false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y[i] = std::max(0.0, to_double(T(out.multipliers[static_cast<size_t>(i)] / total)));
  }
  result.y_ub = y.head(up);
  result.y_lb = y.tail(y.size() - up);
  result.point.resize(0);
  const Eigen::VectorXd aty = s.a.transpose() * y;
  result.residual = aty.size() > 0 ? std::max(0.0, -aty.minCoeff()) : 0.0;
  result.farkas_value = s.b.dot(y);
  return result.residual <= tol && result.farkas_value < 0.0;
}

}  // namespace

int LpProblem::variables() const {
  if (a_ub.rows() > 0 && a_lb.rows() > 0 && a_ub.cols() != a_lb.cols()) {
    throw DimensionError("lp_solve: A_ub and A_lb have different column counts");
  }
  return static_cast<int>(a_ub.rows() > 0 ? a_ub.cols() : a_lb.cols());
}

LpResult lp_solve(const LpProblem& problem, const LpOptions& options) {
  if (problem.a_ub.rows() != problem.b_ub.size() || problem.a_lb.rows() != problem.b_lb.size()) {
    throw DimensionError("lp_solve: right-hand side length mismatch");
  }
  const Stacked s = stack_rows(problem);
  if (!s.a.allFinite() || !s.b.allFinite()) throw ContractError("lp_solve: non-finite coefficients");
  const bool small = s.a.rows() <= options.exact_max_constraints;
  if (options.force_exact && !small) throw ResourceError("lp_solve: instance too large for exact arithmetic");

  LpResult result;
  double float_gap = 0.0;
  if (!options.force_exact) {
    const auto out = solve_as<double>(s, options, false);
    // Half the tolerance for a*, leaving room for rounding in the residual check.
    const bool feasible = out.infeasibility <= 0.5 * options.tolerance;
    if (assemble(problem, s, out, feasible, options.tolerance, result)) return result;
    float_gap = out.infeasibility;
    if (!options.allow_exact || !small) {
      std::ostringstream msg;
      msg << "lp_solve: floating result failed verification (a* = " << out.infeasibility
          << ", residual = " << result.residual << ", pivots = " << out.pivots << ", rows = " << s.a.rows()
          << ", columns = " << s.a.cols() << ")";
      throw SolverError(msg.str());
    }
  }
  const auto exact = solve_as<Rational>(s, options, true);
  const bool feasible = exact.infeasibility <= Rational(0);
  if (!assemble(problem, s, exact, feasible, options.tolerance, result)) {
    std::ostringstream msg;
    msg << "lp_solve: exact result failed floating verification (floating a* = " << float_gap
        << ", residual = " << result.residual << ")";
    throw SolverError(msg.str());
  }
  result.exact = true;
  return result;
}

}  // namespace lpdual

#pragma once

// Small dense two-phase simplex with Bland's rule.
//
//   maximize   objective . x
//   subject to lower <= x <= upper   (finite)
//              rows[k] . x <= rhs[k]
//
// Variables are shifted to y = x - lower >= 0 and the upper bounds become
// ordinary rows, so the tableau has (rows + n) constraints. Intended for the
// tiny programs the discrete solver and the menu search generate.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "dnc/errors.hpp"

namespace dnc {

struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  std::size_t size() const noexcept { return objective.size(); }

  void add_row(std::vector<double> row, double bound) {
    rows.push_back(std::move(row));
    rhs.push_back(bound);
  }
};

enum class LpStatus { optimal, infeasible };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  std::vector<double> x;
};

namespace detail {

class Tableau {
 public:
  static constexpr double kPivotEps = 1e-11;

  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), cols_(cols), a_(rows + 1, std::vector<double>(cols + 1, 0.0)), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  double rhs(std::size_t r) const { return a_[r][cols_]; }
  double& rhs(std::size_t r) { return a_[r][cols_]; }
  std::vector<double>& objective_row() { return a_[m_]; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return m_; }

  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / a_[r][c];
    for (double& v : a_[r]) v *= inv;
    a_[r][c] = 1.0;
    for (std::size_t k = 0; k <= m_; ++k) {
      if (k == r) continue;
      const double f = a_[k][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) a_[k][j] -= f * a_[r][j];
      a_[k][c] = 0.0;
    }
    basis_[r] = c;
  }

  // Maximizes the objective row (stored as reduced costs: entering columns
  // have a positive entry) over the first `usable` columns.
  // Returns false if unbounded.
  bool optimize(std::size_t usable) {
    for (std::size_t iter = 0; iter < 100000; ++iter) {
      std::size_t enter = usable;
      for (std::size_t j = 0; j < usable; ++j) {
        if (a_[m_][j] > 1e-12) {
          enter = j;
          break;
        }
      }
      if (enter == usable) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        if (a_[r][enter] > kPivotEps) {
          const double ratio = a_[r][cols_] / a_[r][enter];
          if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && leave < m_ && basis_[r] < basis_[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    throw SolverError("simplex iteration limit reached", {});
  }

 private:
  std::size_t m_, cols_;
  std::vector<std::vector<double>> a_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.size();
  if (lp.lower.size() != n || lp.upper.size() != n || lp.rows.size() != lp.rhs.size()) {
    throw DomainError("linear program dimension mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lp.lower[i]) || !std::isfinite(lp.upper[i])) throw DomainError("LP bounds must be finite");
    if (lp.lower[i] > lp.upper[i]) return {};
  }
  for (const auto& row : lp.rows) {
    if (row.size() != n) throw DomainError("LP row has wrong length");
  }

  // Constraint list over y = x - lower: general rows, then y_i <= upper_i - lower_i.
  const std::size_t m = lp.rows.size() + n;
  std::vector<std::vector<double>> a(m, std::vector<double>(n, 0.0));
  std::vector<double> b(m);
  for (std::size_t k = 0; k < lp.rows.size(); ++k) {
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[k][i] = lp.rows[k][i];
      shift += lp.rows[k][i] * lp.lower[i];
    }
    b[k] = lp.rhs[k] - shift;
  }
  for (std::size_t i = 0; i < n; ++i) {
    a[lp.rows.size() + i][i] = 1.0;
    b[lp.rows.size() + i] = lp.upper[i] - lp.lower[i];
  }

  // Columns: y (n), slacks (m), artificials (one per negative-rhs row).
  std::vector<std::size_t> negative;
  for (std::size_t k = 0; k < m; ++k) {
    if (b[k] < 0.0) negative.push_back(k);
  }
  const std::size_t cols = n + m + negative.size();
  detail::Tableau tab(m, cols);
  std::size_t art = n + m;
  for (std::size_t k = 0; k < m; ++k) {
    const double sign = b[k] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) tab.at(k, i) = sign * a[k][i];
    tab.at(k, n + k) = sign;
    tab.rhs(k) = sign * b[k];
    if (b[k] < 0.0) {
      tab.at(k, art) = 1.0;
      tab.basis(k) = art++;
    } else {
      tab.basis(k) = n + k;
    }
  }

  if (!negative.empty()) {
    // Phase one: maximize -sum(artificials).
    auto& obj = tab.objective_row();
    std::fill(obj.begin(), obj.end(), 0.0);
    for (std::size_t k : negative) {
      for (std::size_t j = 0; j <= cols; ++j) {
        if (j < n + m || j == cols) obj[j] += tab.at(k, j);
      }
    }
    tab.optimize(cols);
    if (obj[cols] > 1e-9) return {};
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis(r) < n + m) continue;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (std::abs(tab.at(r, j)) > 1e-9) {
          tab.pivot(r, j);
          break;
        }
      }
    }
  }

  // Phase two. Artificial columns are excluded from entering.
  auto& obj = tab.objective_row();
  std::fill(obj.begin(), obj.end(), 0.0);
  double constant = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    obj[i] = lp.objective[i];
    constant += lp.objective[i] * lp.lower[i];
  }
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t bc = tab.basis(r);
    const double f = obj[bc];
    if (f == 0.0) continue;
    for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * tab.at(r, j);
  }
  if (!tab.optimize(n + m)) throw SolverError("linear program unbounded despite finite bounds", {});

  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.x = lp.lower;
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis(r) < n) sol.x[tab.basis(r)] += tab.rhs(r);
  }
  for (std::size_t i = 0; i < n; ++i) sol.x[i] = std::min(std::max(sol.x[i], lp.lower[i]), lp.upper[i]);
  sol.value = 0.0;
  for (std::size_t i = 0; i < n; ++i) sol.value += lp.objective[i] * sol.x[i];
  (void)constant;
  return sol;
}

}  // namespace dnc

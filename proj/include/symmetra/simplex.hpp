#pragma once

#include <string>
#include <type_traits>
#include <vector>

#include "symmetra/types.hpp"

namespace symmetra {

// Dense two-phase tableau simplex over an ordered field.  S = double uses a
// Dantzig rule with a Bland fallback against cycling; exact scalar types
// (e.g. boost rationals) use Bland throughout and terminate finitely.

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

enum class Cmp { LE, GE, EQ };

template <class S>
struct LpProblem {
  int n = 0;  // number of variables, all constrained x_j >= 0
  std::vector<S> c;
  bool maximize = false;
  std::vector<std::vector<S>> A;
  std::vector<Cmp> cmp;
  std::vector<S> b;

  void add_row(std::vector<S> row, Cmp op, S rhs) {
    A.push_back(std::move(row));
    cmp.push_back(op);
    b.push_back(std::move(rhs));
  }
};

template <class S>
struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  S value{};
  std::vector<S> x;
  // dual[i] is the multiplier y_i of row i with c^T x* = y^T b for optimal
  // solutions; signs follow the min convention (y >= 0 on GE rows).
  std::vector<S> dual;
  long iterations = 0;
};

namespace lp_detail {

template <class S>
S abs_val(const S& v) {
  return v < S(0) ? S(-v) : v;
}

template <class S>
constexpr bool exact_scalar() {
  return !std::is_floating_point_v<S>;
}

template <class S>
S pivot_tol() {
  if constexpr (exact_scalar<S>()) return S(0);
  return S(1e-11);
}

template <class S>
S feas_tol() {
  if constexpr (exact_scalar<S>()) return S(0);
  return S(1e-7);
}

}  // namespace lp_detail

template <class S>
LpResult<S> solve_lp(const LpProblem<S>& prob, long max_iter = 200000) {
  using lp_detail::abs_val;
  const int m = static_cast<int>(prob.A.size());
  const int n = prob.n;
  for (const auto& row : prob.A)
    if (static_cast<int>(row.size()) != n) throw Error("lp row length != n");
  const S ptol = lp_detail::pivot_tol<S>();

  // Rows with b < 0 are stored negated with the sense flipped; column counts
  // must follow the flipped senses.
  std::vector<Cmp> ecmp(prob.cmp);
  for (int i = 0; i < m; ++i)
    if (prob.b[i] < S(0)) {
      if (ecmp[i] == Cmp::LE) ecmp[i] = Cmp::GE;
      else if (ecmp[i] == Cmp::GE) ecmp[i] = Cmp::LE;
    }

  // Columns: n originals, then one slack/surplus per inequality row, then one
  // artificial per GE/EQ row.  Artificial columns double as dual readouts.
  int n_slack = 0, n_art = 0;
  for (Cmp c : ecmp) {
    if (c != Cmp::EQ) ++n_slack;
    if (c != Cmp::LE) ++n_art;
  }
  const int cols = n + n_slack + n_art;

  // Tableau rows: m constraint rows + objective row; last column is rhs.
  std::vector<std::vector<S>> T(m + 1, std::vector<S>(cols + 1, S(0)));
  std::vector<int> basis(m, -1);
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  {
    int sc = n, ac = n + n_slack;
    for (int i = 0; i < m; ++i) {
      const bool flip = prob.b[i] < S(0);
      for (int j = 0; j < n; ++j)
        T[i][j] = flip ? S(-prob.A[i][j]) : prob.A[i][j];
      T[i][cols] = flip ? S(-prob.b[i]) : prob.b[i];
      const Cmp c = ecmp[i];
      if (c != Cmp::EQ) {
        slack_col[i] = sc;
        T[i][sc] = (c == Cmp::LE) ? S(1) : S(-1);
        ++sc;
      }
      if (c == Cmp::LE) {
        basis[i] = slack_col[i];
      } else {
        art_col[i] = ac;
        T[i][ac] = S(1);
        basis[i] = ac;
        ++ac;
      }
    }
  }

  LpResult<S> res;
  std::vector<char> blocked(cols, 0);

  auto pivot = [&](int pr, int pc) {
    const S piv = T[pr][pc];
    for (int j = 0; j <= cols; ++j) T[pr][j] = T[pr][j] / piv;
    for (int i = 0; i <= m; ++i) {
      if (i == pr) continue;
      const S f = T[i][pc];
      if (f == S(0)) continue;
      for (int j = 0; j <= cols; ++j) T[i][j] = T[i][j] - f * T[pr][j];
    }
    if (pr < m) basis[pr] = pc;
  };

  // Runs simplex on the current objective row; returns false on unbounded.
  auto iterate = [&](bool use_dantzig) -> bool {
    long stall = 0;
    S last_obj = T[m][cols];
    while (res.iterations < max_iter) {
      bool bland = !use_dantzig || lp_detail::exact_scalar<S>() ||
                   stall > 2L * (m + cols);
      int pc = -1;
      if (bland) {
        for (int j = 0; j < cols; ++j)
          if (!blocked[j] && T[m][j] < -ptol) {
            pc = j;
            break;
          }
      } else {
        S best = -ptol;
        for (int j = 0; j < cols; ++j)
          if (!blocked[j] && T[m][j] < best) {
            best = T[m][j];
            pc = j;
          }
      }
      if (pc < 0) return true;  // optimal

      int pr = -1;
      S best_ratio{};
      for (int i = 0; i < m; ++i) {
        if (T[i][pc] > ptol) {
          const S ratio = T[i][cols] / T[i][pc];
          if (pr < 0 || ratio < best_ratio ||
              (ratio == best_ratio && basis[i] < basis[pr])) {
            pr = i;
            best_ratio = ratio;
          }
        }
      }
      if (pr < 0) return false;  // unbounded direction
      pivot(pr, pc);
      ++res.iterations;
      if constexpr (!lp_detail::exact_scalar<S>()) {
        if (abs_val(S(T[m][cols] - last_obj)) <=
            S(1e-12) * (S(1) + abs_val(last_obj)))
          ++stall;
        else
          stall = 0;
        last_obj = T[m][cols];
      }
    }
    return true;  // iteration cap; caller checks
  };

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (int j = n + n_slack; j < cols; ++j) T[m][j] = S(1);
    // express objective in terms of nonbasic columns
    for (int i = 0; i < m; ++i)
      if (basis[i] >= n + n_slack)
        for (int j = 0; j <= cols; ++j) T[m][j] = T[m][j] - T[i][j];
    if (!iterate(true)) throw Error("phase-1 simplex reported unbounded");
    if (res.iterations >= max_iter) {
      res.status = LpStatus::IterationLimit;
      return res;
    }
    if (T[m][cols] < -lp_detail::feas_tol<S>()) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Drive leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (basis[i] < n + n_slack) continue;
      int pc = -1;
      for (int j = 0; j < n + n_slack; ++j)
        if (abs_val(T[i][j]) > ptol) {
          pc = j;
          break;
        }
      if (pc >= 0) pivot(i, pc);
      // else: redundant row, artificial stays basic at value 0
    }
    for (int j = n + n_slack; j < cols; ++j) blocked[j] = 1;
  }

  // Phase 2 objective (minimization internally).
  for (int j = 0; j <= cols; ++j) T[m][j] = S(0);
  for (int j = 0; j < n; ++j)
    T[m][j] = prob.maximize ? S(-prob.c[j]) : prob.c[j];
  for (int i = 0; i < m; ++i) {
    const int bj = basis[i];
    const S cb = T[m][bj];
    if (cb == S(0)) continue;
    for (int j = 0; j <= cols; ++j) T[m][j] = T[m][j] - cb * T[i][j];
  }
  if (!iterate(true)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  if (res.iterations >= max_iter) {
    res.status = LpStatus::IterationLimit;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.x.assign(n, S(0));
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = T[i][cols];
  S obj = S(-T[m][cols]);  // row holds -(objective value) for min
  res.value = prob.maximize ? S(-obj) : obj;

  // Duals from reduced costs: slack of a LE row has column e_i and cost 0, so
  // its reduced cost equals -y_i; surplus (-e_i) gives +y_i; artificials on
  // EQ/GE rows have column e_i giving -y_i again.
  res.dual.assign(m, S(0));
  for (int i = 0; i < m; ++i) {
    S y = (art_col[i] >= 0) ? S(-T[m][art_col[i]]) : S(-T[m][slack_col[i]]);
    // rows stored negated flip the multiplier sign back
    if (prob.b[i] < S(0)) y = S(-y);
    if (prob.maximize) y = S(-y);
    res.dual[i] = y;
  }
  return res;
}

}  // namespace symmetra

#include "symconv/lp.hpp"

#include "symconv/error.hpp"

namespace symconv {

namespace {

// Tableau rows 0..m-1 are constraints, column n is the right-hand side.
struct Tableau {
  std::size_t m, n;
  std::vector<std::vector<Rational>> t;
  std::vector<std::size_t> basis;

  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / t[r][c];
    for (auto& x : t[r]) x *= inv;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i == r || sgn(t[i][c]) == 0) continue;
      Rational f = t[i][c];
      for (std::size_t j = 0; j <= n; ++j)
        if (sgn(t[r][j]) != 0) t[i][j] -= f * t[r][j];
    }
    basis[r] = c;
  }

  // Objective row is t[m]: reduced costs, minimization. Columns >= allowed are barred from entering.
  bool run(std::size_t allowed) {
    for (;;) {
      std::size_t enter = n;
      for (std::size_t j = 0; j < allowed; ++j)
        if (sgn(t[m][j]) < 0) { enter = j; break; }
      if (enter == n) return true;
      std::size_t leave = m;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(t[i][enter]) <= 0) continue;
        Rational ratio = t[i][n] / t[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const QMatrix& A, const QVector& b, const QVector& c) {
  const std::size_t m = A.rows(), nv = A.cols();
  if (b.size() != m || c.size() != nv) throw Error(ErrorCode::InvalidArgument, "LP dimension mismatch");

  // phase 1: artificials in columns nv..nv+m-1
  Tableau T{m, nv + m, {}, {}};
  T.t.assign(m + 1, std::vector<Rational>(nv + m + 1, Rational(0)));
  T.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    bool flip = sgn(b[i]) < 0;
    for (std::size_t j = 0; j < nv; ++j) T.t[i][j] = flip ? Rational(-A(i, j)) : A(i, j);
    T.t[i][nv + i] = 1;
    T.t[i][nv + m] = flip ? Rational(-b[i]) : b[i];
    T.basis[i] = nv + i;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= nv + m; ++j)
      if (j < nv || j == nv + m) T.t[m][j] -= T.t[i][j];
  T.run(nv + m);

  LpResult res;
  if (sgn(T.t[m][nv + m]) != 0) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // drive artificials out of the basis; drop redundant rows
  for (std::size_t i = 0; i < T.m;) {
    if (T.basis[i] < nv) { ++i; continue; }
    std::size_t c2 = nv;
    for (std::size_t j = 0; j < nv; ++j)
      if (sgn(T.t[i][j]) != 0) { c2 = j; break; }
    if (c2 < nv) {
      T.pivot(i, c2);
      ++i;
    } else {
      T.t.erase(T.t.begin() + static_cast<long>(i));
      T.basis.erase(T.basis.begin() + static_cast<long>(i));
      --T.m;
    }
  }

  // phase 2 objective
  auto& obj = T.t[T.m];
  for (auto& x : obj) x = 0;
  for (std::size_t j = 0; j < nv; ++j) obj[j] = c[j];
  for (std::size_t i = 0; i < T.m; ++i) {
    const Rational cb = c[T.basis[i]];
    if (sgn(cb) == 0) continue;
    for (std::size_t j = 0; j <= T.n; ++j) obj[j] -= cb * T.t[i][j];
  }
  if (!T.run(nv)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.y = QVector(nv);
  for (std::size_t i = 0; i < T.m; ++i) res.y[T.basis[i]] = T.t[i][T.n];
  res.value = dot(c, res.y);
  return res;
}

bool lp_feasible(const QMatrix& A, const QVector& b) {
  return solve_lp(A, b, QVector(A.cols())).status == LpStatus::Optimal;
}

}  // namespace symconv

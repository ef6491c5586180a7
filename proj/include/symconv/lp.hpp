#pragma once

#include "symconv/rational.hpp"

namespace symconv {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;  // optimal objective, valid when status == Optimal
  QVector y;       // optimal point
};

/// minimize c.y subject to A y = b, y >= 0. Exact two-phase simplex with Bland's rule.
LpResult solve_lp(const QMatrix& A, const QVector& b, const QVector& c);

/// Feasibility of A y = b, y >= 0.
bool lp_feasible(const QMatrix& A, const QVector& b);

}  // namespace symconv

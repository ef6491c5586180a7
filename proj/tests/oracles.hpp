#pragma once

// Independent reference implementations used by the tests. Nothing here calls the LP or
// Fourier-Motzkin code of the library.

#include "symconv/polyhedra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using symconv::QMatrix;
using symconv::QVector;
using symconv::Rational;

// Subsets S of columns of A (given as vectors) whose restricted kernel is a single line spanned by a
// vector with strictly positive entries. These are exactly the extreme rays of {l >= 0 : A l = 0}.
inline std::vector<std::vector<std::pair<std::size_t, Rational>>> positive_circuits(const std::vector<QVector>& cols,
                                                                                   std::size_t rows) {
  std::vector<std::vector<std::pair<std::size_t, Rational>>> out;
  const std::size_t m = cols.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> S;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) S.push_back(i);
    std::vector<QVector> sub;
    for (auto i : S) sub.push_back(cols[i]);
    auto ker = symconv::nullspace(QMatrix::from_cols(sub, rows));
    if (ker.size() != 1) continue;
    QVector v = ker[0];
    int s0 = sgn(v[0]);
    bool ok = s0 != 0;
    for (std::size_t k = 0; k < v.size() && ok; ++k) ok = sgn(v[k]) == s0;
    if (!ok) continue;
    std::vector<std::pair<std::size_t, Rational>> c;
    for (std::size_t k = 0; k < S.size(); ++k) c.emplace_back(S[k], s0 > 0 ? v[k] : Rational(-v[k]));
    out.push_back(c);
  }
  return out;
}

inline QVector combine(const std::vector<QVector>& gens, const std::vector<std::pair<std::size_t, Rational>>& c,
                       std::size_t dim) {
  QVector x(dim);
  for (const auto& [i, l] : c) x = x + l * gens[i];
  return x;
}

// Some nonzero x in cone(gens) with p x = 0.
inline bool kernel_meets_cone(const QMatrix& p, const std::vector<QVector>& gens, std::size_t dim) {
  std::vector<QVector> images;
  for (const auto& g : gens) images.push_back(p * g);
  for (const auto& c : positive_circuits(images, p.rows()))
    if (!combine(gens, c, dim).is_zero()) return true;
  return false;
}

// cone(gens) contains a line iff some positive combination of nonzero generators vanishes.
inline bool pointed(const std::vector<QVector>& gens, std::size_t dim) {
  std::vector<QVector> nz;
  for (const auto& g : gens)
    if (!g.is_zero()) nz.push_back(g);
  return positive_circuits(nz, dim).empty();
}

inline bool proper(const QMatrix& p, const std::vector<QVector>& gens, std::size_t dim) {
  return !kernel_meets_cone(p, gens, dim);
}

inline QVector random_int_vector(std::mt19937_64& rng, std::size_t dim, int lo, int hi) {
  std::uniform_int_distribution<int> u(lo, hi);
  QVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

// A random low-dimensional cone; about a third of them contain a line by construction.
inline symconv::Cone random_cone(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim_d(1, 3), count(0, 5), coin(0, 2);
  std::size_t dim = static_cast<std::size_t>(dim_d(rng));
  symconv::Cone c{dim, {}};
  int m = count(rng);
  for (int i = 0; i < m; ++i) c.generators.push_back(random_int_vector(rng, dim, -3, 3));
  if (coin(rng) == 0 && !c.generators.empty()) c.generators.push_back(-c.generators.front());
  return c;
}

inline QMatrix random_map(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<int> rows_d(1, static_cast<int>(dim));
  std::size_t rows = static_cast<std::size_t>(rows_d(rng));
  std::vector<QVector> r;
  for (std::size_t i = 0; i < rows; ++i) r.push_back(random_int_vector(rng, dim, -2, 2));
  return QMatrix::from_rows(r, dim);
}

// x in conv(V) + cone(G) by Caratheodory: some subset with linearly independent lifted columns
// (v, 1) and (g, 0) writes (x, 1) with nonnegative coefficients.
inline bool in_set(const std::vector<QVector>& V, const std::vector<QVector>& G, const QVector& x) {
  const std::size_t dim = x.size();
  std::vector<QVector> cols;
  for (const auto& v : V) {
    QVector c(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) c[i] = v[i];
    c[dim] = 1;
    cols.push_back(c);
  }
  for (const auto& g : G) {
    QVector c(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) c[i] = g[i];
    cols.push_back(c);
  }
  QVector rhs(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) rhs[i] = x[i];
  rhs[dim] = 1;
  const std::size_t m = cols.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<QVector> sub;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) sub.push_back(cols[i]);
    if (sub.size() > dim + 1) continue;
    QMatrix A = QMatrix::from_cols(sub, dim + 1);
    if (symconv::rank(A) != sub.size()) continue;
    // augmented system [A | rhs] consistent with a nonnegative solution
    std::vector<QVector> aug = sub;
    aug.push_back(rhs);
    auto ker = symconv::nullspace(QMatrix::from_cols(aug, dim + 1));
    if (ker.size() != 1) continue;
    const QVector& k = ker[0];
    if (sgn(k[sub.size()]) == 0) continue;
    Rational scale = Rational(-1) / k[sub.size()];
    bool ok = true;
    for (std::size_t i = 0; i < sub.size() && ok; ++i) ok = sgn(k[i] * scale) >= 0;
    if (ok) return true;
  }
  return false;
}

// g = k a n with n upper unipotent: a_i from classical Gram-Schmidt on the columns.
inline Eigen::VectorXd gram_schmidt_log_diag(const Eigen::MatrixXd& g) {
  const auto n = g.cols();
  Eigen::MatrixXd q = g;
  Eigen::VectorXd out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(g.col(j)) * q.col(i);
    double r = q.col(j).norm();
    out(j) = std::log(r);
    q.col(j) /= r;
  }
  return out;
}

}  // namespace oracle

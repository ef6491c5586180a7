#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace symconv {

using Rational = mpq_class;

/// p/q in canonical form (the two-argument mpq_class constructor does not reduce).
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Dense exact vector.
struct QVector {
  std::vector<Rational> v;

  QVector() = default;
  explicit QVector(std::size_t n) : v(n, Rational(0)) {}
  QVector(std::initializer_list<Rational> init) : v(init) {}
  explicit QVector(std::vector<Rational> data) : v(std::move(data)) {}

  std::size_t size() const { return v.size(); }
  Rational& operator[](std::size_t i) { return v[i]; }
  const Rational& operator[](std::size_t i) const { return v[i]; }

  bool is_zero() const;

  friend QVector operator+(const QVector& a, const QVector& b);
  friend QVector operator-(const QVector& a, const QVector& b);
  friend QVector operator-(const QVector& a);
  friend QVector operator*(const Rational& s, const QVector& a);
  friend bool operator==(const QVector& a, const QVector& b) { return a.v == b.v; }
  friend bool operator!=(const QVector& a, const QVector& b) { return !(a == b); }
  // lexicographic, used for std::map keys and canonical ordering
  friend bool operator<(const QVector& a, const QVector& b);
};

Rational dot(const QVector& a, const QVector& b);

/// Dense exact matrix, row major.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}
  QMatrix(std::initializer_list<std::initializer_list<Rational>> init);

  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);
  static QMatrix from_cols(const std::vector<QVector>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  QVector row(std::size_t i) const;
  QVector col(std::size_t j) const;

  QMatrix transpose() const;
  bool is_square() const { return rows_ == cols_; }

  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QVector operator*(const QMatrix& a, const QVector& x);
  friend QMatrix operator*(const Rational& s, const QMatrix& a);
  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator<(const QMatrix& a, const QMatrix& b) { return a.a_ < b.a_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

// Gaussian elimination helpers. All exact.
std::size_t rank(const QMatrix& m);
/// Basis of {x : m x = 0}, one vector per free column of the reduced echelon form.
std::vector<QVector> nullspace(const QMatrix& m);
/// Throws Error(SingularInput) when m is not invertible.
QMatrix inverse(const QMatrix& m);
/// Reduced row echelon form; returns the pivot columns.
std::vector<std::size_t> rref(QMatrix& m);
/// A maximal linearly independent subfamily (indices into vs, first-come order).
std::vector<std::size_t> independent_subset(const std::vector<QVector>& vs);

/// Scale to a primitive integer vector with the same direction (positive multiple).
QVector primitive(const QVector& v);

// Parsing and printing. Accepts "p/q", "p", decimal "1.25" and "-0.5".
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
/// Exact value of a finite double.
Rational from_double(double x);

Eigen::VectorXd to_eigen(const QVector& v);
Eigen::MatrixXd to_eigen(const QMatrix& m);
QVector from_eigen(const Eigen::VectorXd& v);

}  // namespace symconv

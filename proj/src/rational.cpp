#include "symconv/rational.hpp"

#include "symconv/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace symconv {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAnInvolution: return "NotAnInvolution";
    case ErrorCode::RootSetNotSigmaStable: return "RootSetNotSigmaStable";
    case ErrorCode::BadMultiplicity: return "BadMultiplicity";
    case ErrorCode::ClosureTooLarge: return "ClosureTooLarge";
    case ErrorCode::MissingMultiplicity: return "MissingMultiplicity";
    case ErrorCode::NoSimpleRootFound: return "NoSimpleRootFound";
    case ErrorCode::ZeroRoot: return "ZeroRoot";
    case ErrorCode::NotQExtreme: return "NotQExtreme";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::NotALocalMin: return "NotALocalMin";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NotUnipotent: return "NotUnipotent";
    case ErrorCode::NotInNP: return "NotInNP";
    case ErrorCode::NotInPH: return "NotInPH";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::RealizationError: return "RealizationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool QVector::is_zero() const {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

static void check_same(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
}

QVector operator+(const QVector& a, const QVector& b) {
  check_same(a.size(), b.size());
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVector operator-(const QVector& a, const QVector& b) {
  check_same(a.size(), b.size());
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVector operator-(const QVector& a) {
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

QVector operator*(const Rational& s, const QVector& a) {
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

bool operator<(const QVector& a, const QVector& b) {
  return std::lexicographical_compare(a.v.begin(), a.v.end(), b.v.begin(), b.v.end());
}

Rational dot(const QVector& a, const QVector& b) {
  check_same(a.size(), b.size());
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto& r : init) {
    check_same(r.size(), cols_);
    for (const auto& x : r) a_.push_back(x);
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    check_same(rows[i].size(), cols);
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

QMatrix QMatrix::from_cols(const std::vector<QVector>& cols, std::size_t rows) {
  QMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    check_same(cols[j].size(), rows);
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

QVector QMatrix::row(std::size_t i) const {
  QVector r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

QVector QMatrix::col(std::size_t j) const {
  QVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  check_same(a.rows_, b.rows_);
  check_same(a.cols_, b.cols_);
  QMatrix r(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] + b.a_[k];
  return r;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  check_same(a.rows_, b.rows_);
  check_same(a.cols_, b.cols_);
  QMatrix r(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] - b.a_[k];
  return r;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  check_same(a.cols_, b.rows_);
  QMatrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += x * b(k, j);
    }
  return r;
}

QVector operator*(const QMatrix& a, const QVector& x) {
  check_same(a.cols_, x.size());
  QVector r(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * x[j];
  return r;
}

QMatrix operator*(const Rational& s, const QMatrix& a) {
  QMatrix r = a;
  for (auto& x : r.a_) x *= s;
  return r;
}

std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(const QMatrix& m) {
  QMatrix t = m;
  return rref(t).size();
}

std::vector<QVector> nullspace(const QMatrix& m) {
  QMatrix t = m;
  auto piv = rref(t);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVector x(m.cols());
    x[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = -t(i, f);
    basis.push_back(x);
  }
  return basis;
}

QMatrix inverse(const QMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::SingularInput, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw Error(ErrorCode::SingularInput, "matrix is singular");
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::vector<std::size_t> independent_subset(const std::vector<QVector>& vs) {
  std::vector<std::size_t> keep;
  std::vector<QVector> basis;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    basis.push_back(vs[i]);
    if (rank(QMatrix::from_rows(basis, vs[i].size())) == basis.size())
      keep.push_back(i);
    else
      basis.pop_back();
  }
  return keep;
}

QVector primitive(const QVector& v) {
  if (v.is_zero()) return v;
  mpz_class l = 1;
  for (const auto& x : v.v) l = lcm(l, mpz_class(x.get_den()));
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const auto& x : v.v) {
    mpz_class k = mpz_class(x.get_num()) * (l / mpz_class(x.get_den()));
    ints.push_back(k);
    g = gcd(g, k);
  }
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rational(ints[i] / g);
  return r;
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty rational");
  auto dotpos = s.find('.');
  auto epos = s.find_first_of("eE");
  if (dotpos != std::string::npos || epos != std::string::npos) {
    // decimal literal, read exactly as written
    std::string mant = epos == std::string::npos ? s : s.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) exp10 = std::stol(s.substr(epos + 1));
    bool neg = !mant.empty() && mant[0] == '-';
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant = mant.substr(1);
    std::string digits;
    long frac = 0;
    bool after = false;
    for (char c : mant) {
      if (c == '.') {
        if (after) throw Error(ErrorCode::InvalidArgument, "bad decimal " + s);
        after = true;
      } else if (c >= '0' && c <= '9') {
        digits.push_back(c);
        if (after) ++frac;
      } else {
        throw Error(ErrorCode::InvalidArgument, "bad decimal " + s);
      }
    }
    if (digits.empty()) throw Error(ErrorCode::InvalidArgument, "bad decimal " + s);
    Rational q{mpz_class(digits)};
    long e = exp10 - frac;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e < 0) q /= Rational(p10); else q *= Rational(p10);
    return neg ? Rational(-q) : q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw Error(ErrorCode::InvalidArgument, "bad rational " + s);
  if (q.get_den() == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite double");
  return Rational(x);
}

Eigen::VectorXd to_eigen(const QVector& v) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i].get_d();
  return r;
}

Eigen::MatrixXd to_eigen(const QMatrix& m) {
  Eigen::MatrixXd r(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
  return r;
}

QVector from_eigen(const Eigen::VectorXd& v) {
  QVector r(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) r[static_cast<std::size_t>(i)] = from_double(v(i));
  return r;
}

}  // namespace symconv

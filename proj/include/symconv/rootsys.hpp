#pragma once

#include "symconv/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace symconv {

/// A root is stored as the coefficient vector of a linear functional on a:
/// alpha(x) = dot(coords, x) where x holds coordinates in the chosen basis of a.
using RootVector = QVector;

/// (dim g_alpha, dim g_{alpha,+}, dim g_{alpha,-}); the signed parts are only
/// meaningful for roots fixed by sigma*theta.
struct Multiplicity {
  int dim = 1;
  std::optional<int> plus;
  std::optional<int> minus;

  bool operator==(const Multiplicity&) const = default;
};

class SymmetricPairDatum {
 public:
  /// Validates and builds. Throws NotAnInvolution, RootSetNotSigmaStable,
  /// BadMultiplicity, ZeroRoot or InvalidArgument.
  static SymmetricPairDatum build(std::vector<RootVector> roots, QMatrix gram, QMatrix sigma_on_a,
                                  std::vector<Multiplicity> mult_table);

  std::size_t dim() const { return gram_.rows(); }
  std::size_t size() const { return roots_.size(); }
  const std::vector<RootVector>& roots() const { return roots_; }
  const RootVector& root(std::size_t i) const { return roots_[i]; }
  const std::vector<Multiplicity>& mult_table() const { return mult_; }
  const Multiplicity& mult(std::size_t i) const { return mult_[i]; }

  const QMatrix& gram() const { return gram_; }
  const QMatrix& gram_inverse() const { return gram_inv_; }
  const QMatrix& sigma_on_a() const { return sigma_; }
  /// sigma*theta on a, equal to -sigma_on_a.
  QMatrix sigmatheta_on_a() const { return Rational(-1) * sigma_; }
  const QMatrix& q_projector() const { return pr_q_; }
  QMatrix h_projector() const { return QMatrix::identity(dim()) - pr_q_; }
  const std::vector<QVector>& a_h_basis() const { return a_h_; }
  const std::vector<QVector>& a_q_basis() const { return a_q_; }

  std::optional<std::size_t> find(const RootVector& r) const;
  std::size_t negative(std::size_t i) const { return neg_[i]; }
  /// index of sigma(alpha), where (sigma alpha)(x) = alpha(sigma x)
  std::size_t sigma_image(std::size_t i) const { return sig_[i]; }
  /// index of sigma*theta(alpha) = -sigma(alpha)
  std::size_t sigmatheta_image(std::size_t i) const { return neg_[sig_[i]]; }
  bool in_aq_star(std::size_t i) const { return sig_[i] == neg_[i]; }  // sigma alpha = -alpha
  bool in_ah_star(std::size_t i) const { return sig_[i] == i; }        // sigma alpha = alpha

  /// <x, y> on a.
  Rational inner(const QVector& x, const QVector& y) const;
  /// <alpha, beta> on a^*, via the inverse Gram matrix.
  Rational inner_dual(const QVector& a, const QVector& b) const;

 private:
  std::vector<RootVector> roots_;
  std::vector<Multiplicity> mult_;
  QMatrix gram_, gram_inv_, sigma_, pr_q_;
  std::vector<QVector> a_h_, a_q_;
  std::vector<std::size_t> neg_, sig_;
  std::map<QVector, std::size_t> index_;
};

struct RestrictedRoot {
  QVector functional;  // alpha o pr_q, a functional on a vanishing on a_h
  int multiplicity = 0;
  bool plus = false;
  bool minus = false;
  std::vector<std::size_t> sources;  // roots of Sigma(g,a) restricting to it
};

struct RestrictedRootDatum {
  std::vector<RestrictedRoot> roots_q;

  std::vector<QVector> all() const;
  std::vector<QVector> plus_set() const;
  std::vector<QVector> minus_set() const;
  std::optional<std::size_t> find(const QVector& f) const;
};

RestrictedRootDatum restricted_roots(const SymmetricPairDatum& d);

class WeylGroup {
 public:
  std::vector<QMatrix> generators;
  std::vector<QMatrix> elements;               // identity first
  std::vector<std::vector<std::size_t>> words;  // shortest generator word per element

  std::size_t order() const { return elements.size(); }
  std::optional<std::size_t> index_of(const QMatrix& w) const;
  std::size_t inverse_index(std::size_t i) const;
  std::string name(std::size_t i) const;

  void build_index();

 private:
  std::map<QMatrix, std::size_t> index_;
};

/// Reflection s(x) = x - lambda(x) H_lambda as a matrix on a.
QMatrix reflection(const QVector& lambda, const QMatrix& gram_inverse);

/// Reflection group of the given functionals. dim is the dimension of a.
/// Throws ClosureTooLarge past the cap.
WeylGroup weyl_group(const std::vector<QVector>& root_set, const QMatrix& gram_inverse, std::size_t dim,
                     std::size_t cap = 100000);

std::vector<QVector> weyl_orbit(const WeylGroup& W, const QVector& point);

/// Action of a matrix w on a-vectors transported to functionals: lambda -> lambda o w^{-1}.
QVector act_on_functional(const QMatrix& w, const QVector& lambda);

/// Presets of the exact data (no matrices).
namespace datums {
SymmetricPairDatum kostant_sl2();
SymmetricPairDatum sl2_so11();
SymmetricPairDatum sl3_so21();
SymmetricPairDatum sl3_sigma_theta();
SymmetricPairDatum group_sl2();
SymmetricPairDatum by_name(const std::string& name);
}  // namespace datums

}  // namespace symconv

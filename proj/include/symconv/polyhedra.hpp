#pragma once

#include "symconv/parabolic.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace symconv {

struct CorootVector {
  QVector h_alpha;        // alpha(H_alpha) = 2, H_alpha orthogonal to ker alpha
  QVector h_alpha_check;  // <H_alpha_check, X> = alpha(X)
};

/// Throws ZeroRoot.
CorootVector coroot(const QVector& alpha, const QMatrix& gram);

/// c_alpha with pr_q(H_alpha) = c_alpha H_{alpha|a_q}; requires alpha|a_q != 0.
Rational c_alpha(const QVector& alpha, const SymmetricPairDatum& d);

struct Cone {
  std::size_t dim = 0;
  std::vector<QVector> generators;
};

/// a.x <= b, or a.x = b for equalities.
struct Inequality {
  QVector a;
  Rational b;
  friend bool operator==(const Inequality& x, const Inequality& y) { return x.a == y.a && x.b == y.b; }
};

struct HRep {
  std::vector<Inequality> equalities;    // reduced echelon form
  std::vector<Inequality> inequalities;  // one per facet, reduced modulo the equalities
  std::size_t affine_dim = 0;
};

/// Exact H-representation of conv(vertices) + cone(generators) by Fourier-Motzkin elimination.
HRep fourier_motzkin(const std::vector<QVector>& vertices, const std::vector<QVector>& generators, std::size_t dim);

class PolyhedralSet {
 public:
  PolyhedralSet(std::vector<QVector> vertices, Cone cone);

  std::size_t dim() const { return cone_.dim; }
  const std::vector<QVector>& vertices() const { return vertices_; }
  const Cone& cone() const { return cone_; }
  const HRep& hrep() const { return hrep_; }

 private:
  std::vector<QVector> vertices_;
  Cone cone_;
  HRep hrep_;
};

/// Exact LP membership.
bool contains(const PolyhedralSet& set, const QVector& x);
/// Membership within tol in the max-norm of a-coordinates; tol = 0 is exact membership of the double.
bool contains(const PolyhedralSet& set, const Eigen::VectorXd& x, double tol);
/// Max-norm distance from x to the set, by exact LP.
Rational distance_inf(const PolyhedralSet& set, const QVector& x);
/// Exact membership from the H-representation.
bool hrep_contains(const HRep& h, const QVector& x);
/// Smallest slack of x over the H-representation, each row scaled to unit Euclidean length of a.
/// Equalities contribute -|a.x - b|. Positive infinity when there are no rows.
double hrep_slack(const HRep& h, const Eigen::VectorXd& x);

bool cone_contains(const Cone& c, const QVector& x);
bool cones_equal(const Cone& a, const Cone& b);

bool is_pointed(const Cone& c);
/// xi with xi.g > 0 for all nonzero generators, when the cone is pointed.
std::optional<QVector> pointedness_certificate(const Cone& c);
/// ker p meets the cone only in 0.
bool proper_on_cone(const QMatrix& p, const Cone& c);
/// The recession cone cone(G) is not pointed.
bool contains_line(const PolyhedralSet& s);

/// Gamma_a(S) = sum of R>=0 H_alpha, and Gamma_{a_q}(S) = pr_q Gamma_a(S).
Cone gamma_a(const SymmetricPairDatum& d, const std::vector<std::size_t>& S);
Cone gamma_aq(const SymmetricPairDatum& d, const std::vector<std::size_t>& S);

/// Gamma(P), generated by pr_q H_alpha for alpha in Sigma(P)_-.
Cone gamma_cone(const PositiveSystem& P);
/// Upsilon(P) from restricted coroots of Delta^+_-. Throws NotQExtreme.
Cone upsilon_cone(const PositiveSystem& P);
/// Gamma_a(Sigma(P) and Sigma(Q-bar)).
Cone gk_cone(const PositiveSystem& P, const PositiveSystem& Q);
/// Index set of Sigma(P) and Sigma(Q-bar): positive for P, negative for Q.
std::vector<std::size_t> gk_roots(const PositiveSystem& P, const PositiveSystem& Q);

PolyhedralSet omega(const QVector& a_log, const WeylGroup& W_KH, const Cone& gamma);

/// Euclidean projection onto conv(points) in the metric x^T G y, by enumeration of faces.
class HullProjector {
 public:
  HullProjector(const std::vector<QVector>& points, const QMatrix& gram);
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;

 private:
  struct Piece {
    Eigen::VectorXd base;
    Eigen::MatrixXd dirs;   // columns p_i - p_0
    Eigen::MatrixXd solve;  // coefficients from x - p_0
  };
  std::vector<Piece> pieces_;
  Eigen::MatrixXd gram_;
};

}  // namespace symconv

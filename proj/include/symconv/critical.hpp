#pragma once

#include "symconv/matrixgrp.hpp"
#include "symconv/polyhedra.hpp"

#include <random>
#include <string>
#include <vector>

namespace symconv {

/// The data (P, log a, X) shared by every function below. a_log and X are a-coordinates of points of a_q.
struct CriticalInput {
  const Realization* R = nullptr;
  PositiveSystem P;
  QVector a_log;
  QVector X;

  /// Throws InvalidArgument when a_log or X leaves a_q.
  CriticalInput(const Realization& R, PositiveSystem P, QVector a_log, QVector X);

  const SymmetricPairDatum& datum() const { return *R->datum; }
  Mat a_group() const;  // exp(log a)
  Mat X_matrix() const;
};

/// W_{K and H} as the reflection group of Sigma(g, a_q)_+.
WeylGroup weyl_group_kh(const SymmetricPairDatum& d);

/// No restricted root vanishes on a_log.
bool is_regular(const SymmetricPairDatum& d, const QVector& a_log);

/// F_{a,X}(h) = <X, H_P(ah)>.
double F(const CriticalInput& in, const Mat& h);

/// The three expressions <X, H_P(ah)>, <X, H_{P,q}(ah)> and B(X, H_{P,q}(ah)).
struct FExpressions {
  double via_H = 0, via_Hq = 0, via_B = 0;
};
FExpressions F_expressions(const CriticalInput& in, const Mat& h);

/// dF(h)(U) = B(U, Ad(nu(ah)^-1) X) on the orthonormal basis R.basis_h().
Vec grad_F(const CriticalInput& in, const Mat& h);
/// Central differences along h exp(tU), Richardson-extrapolated once.
Vec grad_F_numeric(const CriticalInput& in, const Mat& h, double step = 1e-5);

struct CriticalRep {
  std::size_t w = 0;
  std::string name;
  Mat x;
  Rational value;  // <X, w^-1 log a>
};

/// One representative x_w per w in W_{K and H}. Throws NotRegular.
std::vector<CriticalRep> critical_reps(const CriticalInput& in);

/// Orthonormal basis of h_X, the centralizer of X in h.
std::vector<Mat> basis_h_X(const CriticalInput& in);
/// dim(h_X + (n_P and h)), from the matrix model.
std::size_t kernel_dim_numeric(const CriticalInput& in);

enum class OrbitCase { A, B1, B21, B22 };
std::string case_tag(OrbitCase c);

/// One F-orbit O = F alpha with its predicted restriction of L_w to v_O.
struct OrbitCertificate {
  std::size_t root = 0;  // representative alpha in Sigma(P)
  std::vector<std::size_t> orbit;
  OrbitCase kind = OrbitCase::A;
  Rational alpha_X;
  Rational alpha_wlog;               // alpha(w^-1 log a)
  std::vector<double> eigenvalues;   // with multiplicity
  std::string formula;
  bool posdef = true;
};

struct SignaturePrediction {
  bool posdef = true;  // conditions (a) and (b)
  bool condition_a = true, condition_b = true;
  std::vector<OrbitCertificate> orbits;
  std::size_t transversal_dim = 0;
  std::size_t kernel_dim = 0;  // dim h minus the transversal dimension
  int n_plus = 0, n_minus = 0;
};

SignaturePrediction predicted_signature(const CriticalInput& in, std::size_t w);

struct CriticalDatum {
  QVector a_log, X;
  std::vector<CriticalRep> reps;
  std::vector<bool> predicted_posdef;
  std::vector<std::size_t> kernel_dim;
};

CriticalDatum critical_datum(const CriticalInput& in);

struct Signature {
  int n_plus = 0, n_zero = 0, n_minus = 0;
  friend bool operator==(const Signature& a, const Signature& b) {
    return a.n_plus == b.n_plus && a.n_zero == b.n_zero && a.n_minus == b.n_minus;
  }
};

/// Signature of a symmetric matrix; eigenvalues within tol * max(1, |M|) count as zero.
Signature signature_of(const Mat& M, double tol = 1e-7);

/// <U_i, L_w U_j> on R.basis_h().
Mat hessian_analytic(const CriticalInput& in, std::size_t w);
/// d_s d_t F(x_w exp(s U_i) exp(t U_j)) at 0, by a four point stencil and one Richardson step.
Mat hessian_numeric(const CriticalInput& in, std::size_t w, double step = 1e-3);

/// Coordinates on R.basis_h() of an orthonormal basis of h_0 and of each h_O.
std::vector<Mat> orbit_frames(const CriticalInput& in);
/// Largest entry of the blocks coupling distinct summands of h = h_0 + sum h_O.
double offdiag_block_max(const std::vector<Mat>& frames, const Mat& form);

struct HessianReport {
  std::size_t w = 0;
  std::string w_name;
  Mat numeric_form;
  Mat analytic_form;
  Signature signature;           // of the numeric form
  Signature analytic_signature;
  SignaturePrediction prediction;
  std::size_t kernel_dim = 0;    // dim(h_X + (n_P and h))
  double max_rel_error = 0;      // |numeric - analytic| / max(1, |analytic|)
  double offdiag_numeric = 0, offdiag_analytic = 0;
  std::vector<double> analytic_eigenvalues;
  bool posdef_numeric = false;   // transversal block, n_minus == 0
};

/// Throws NotRegular.
HessianReport hessian(const CriticalInput& in, std::size_t w);

/// Exact check that Omega lies in the half space <X, .> >= <X, w^-1 log a>. Throws NotALocalMin.
bool local_min_halfspace_check(const CriticalInput& in, std::size_t w);

/// Omega_{X,w} = conv(W_{K and H_X} w^-1 log a) + Gamma(P_X), one set per w in W_{K and H}.
std::vector<PolyhedralSet> omega_X(const PositiveSystem& P, const QVector& a_log, const QVector& X);

/// A class of X in a_q with a given set of vanishing restricted roots.
struct VanishingPattern {
  std::vector<std::size_t> vanishing;  // indices into restricted_roots(d).roots_q
  std::vector<QVector> subspace;       // basis of the common kernel inside a_q
  QVector representative;
};

/// The realizable patterns other than the one of X = 0.
std::vector<VanishingPattern> vanishing_patterns(const SymmetricPairDatum& d);
/// A random X with exactly the given vanishing pattern, small integer coefficients.
QVector sample_pattern(const SymmetricPairDatum& d, const VanishingPattern& p, std::mt19937_64& rng);

/// Random element of H_X: z exp(Y) with Y Gaussian in h_X.
Mat sample_H_X(const CriticalInput& in, double scale, std::mt19937_64& rng);
/// Random element of N_P and H.
Mat sample_NP_H(const CriticalInput& in, double scale, std::mt19937_64& rng);

}  // namespace symconv

#pragma once

#include "symconv/parabolic.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace symconv {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class SigmaKind { Cartan, ConjugatedCartan, Swap };

struct MatrixUnit {
  int row = 0, col = 0;
};

/// A concrete matrix model of a symmetric pair with split real form.
class Realization {
 public:
  static Realization preset(const std::string& name);
  static std::vector<std::string> preset_names();

  std::string name;
  int n = 0;                  // matrix size
  double killing_scale = 1;   // B(X,Y) = killing_scale * tr(XY)
  std::vector<std::pair<int, int>> blocks;  // (start, size) of diagonal blocks
  SigmaKind kind = SigmaKind::Cartan;
  Mat J;                      // conjugating matrix for ConjugatedCartan, block swap for Swap
  DatumPtr datum;
  std::vector<QVector> basis_a_diag;  // exact diagonal of each basis element of a
  std::vector<Mat> basis_a;
  QVector base_chamber;
  std::vector<Mat> basis_kh, basis_ph;  // sampling bases of k and h, p and h
  std::vector<Mat> z_reps;              // representatives of Z_{K and H}(a_q)
  std::vector<Mat> normalizer_gens;     // generate N_{K and H}(a_q) together with z_reps
  std::vector<std::vector<MatrixUnit>> root_units;  // matrix units spanning each root space

  // Lie algebra and group involutions
  Mat sigma(const Mat& X) const;
  Mat theta(const Mat& X) const { return -X.transpose(); }
  Mat sigma_group(const Mat& g) const;
  Mat theta_group(const Mat& g) const { return g.inverse().transpose(); }
  Mat pi_h(const Mat& X) const { return 0.5 * (X + sigma(X)); }

  double B(const Mat& X, const Mat& Y) const { return killing_scale * (X * Y).trace(); }
  /// <X,Y> = -B(X, theta Y)
  double inner(const Mat& X, const Mat& Y) const { return killing_scale * (X.cwiseProduct(Y)).sum(); }

  Mat a_matrix(const Vec& coords) const;
  /// Coordinates of the diagonal part of X in basis_a.
  Vec a_coords(const Mat& X) const;
  Mat root_vector(std::size_t root, std::size_t k = 0) const;

  PositiveSystem base_parabolic() const { return PositiveSystem(datum, base_chamber); }
  const WeylGroup& w_kh() const { return w_kh_; }
  const Mat& weyl_rep(std::size_t w) const { return weyl_reps_[w]; }
  /// Orthonormal basis of h for <,>.
  const std::vector<Mat>& basis_h() const { return basis_h_; }
  /// Orthonormal basis of n_P and h.
  std::vector<Mat> basis_np_h(const PositiveSystem& P) const;
  /// Matrix units of n_P.
  std::vector<Mat> basis_np(const PositiveSystem& P) const;
  std::vector<MatrixUnit> units_np(const PositiveSystem& P) const;

  Eigen::MatrixXd pr_q() const { return to_eigen(datum->q_projector()); }

  /// Cross-checks of the matrix model against the exact datum. Throws RealizationError.
  void validate() const;

  void finalize();  // derived data; called by preset()

 private:
  Mat a_solver_;
  WeylGroup w_kh_;
  std::vector<Mat> weyl_reps_;
  std::vector<Mat> basis_h_;
};

/// Gram-Schmidt for <,>; drops candidates dependent on earlier ones.
std::vector<Mat> orthonormalize(const Realization& R, const std::vector<Mat>& cand);

/// Block permutation conjugating the base system to P: perm[j] is the index in position j.
std::vector<int> parabolic_permutation(const Realization& R, const PositiveSystem& P);
Mat permutation_matrix(const std::vector<int>& perm);

struct IwasawaTriple {
  Mat k;
  Vec H;  // coordinates in basis_a
  Mat n;
  double condition = 1;
  bool ill_conditioned = false;
};

constexpr double kConditionLimit = 1e8;

/// g = k exp(H) n with n in N_P. Throws SingularInput.
IwasawaTriple iwasawa(const Realization& R, const Mat& g, const PositiveSystem& P);
Vec iwasawa_H(const Realization& R, const Mat& g, const PositiveSystem& P);
Vec h_pq(const Realization& R, const Mat& g, const PositiveSystem& P);

/// Components of X along k, a and n_P for g = k + a + n_P.
Mat project_k(const Mat& X, const std::vector<int>& perm);
Mat project_np(const Mat& X, const std::vector<int>& perm);

Mat exp_nilpotent(const Mat& N);
/// Mercator series; throws NotUnipotent.
Mat log_unipotent(const Mat& u);
Mat expm(const Mat& X);

struct HSample {
  Mat h;
  std::size_t z_index = 0;
  Vec coeff_k, coeff_p;  // coefficients in basis_kh, basis_ph
};

enum class SamplingMode { Exponential, Cartan };

struct SamplingOptions {
  double std_k = 0;  // 0 means radius/2
  double std_p = 0;
  SamplingMode mode = SamplingMode::Exponential;
};

/// h = z exp(Y) with Y Gaussian in h clipped to |Y| <= radius (coefficient norm in the sampling basis).
/// In Cartan mode h = z exp(Y_k) exp(Y_p) with each part clipped to the radius.
std::vector<HSample> sample_H(const Realization& R, double radius, std::size_t count, std::uint64_t seed,
                              const SamplingOptions& opts = {});

/// Random element exp(U) of N_P with Gaussian coefficients of the given scale.
Mat sample_NP(const Realization& R, const PositiveSystem& P, double scale, std::mt19937_64& rng);

struct NilpotentFactors {
  Mat n_plus;
  Mat n_H;
};

/// Z_q = Z_P + sigma theta Z_P, with Z_P nudged inside its chamber until Z_q is regular.
QVector default_zq(const PositiveSystem& P);

/// n = n_plus n_H with n_plus in N_{P,+} and n_H in N_P and H. Throws NotUnipotent, NotInNP.
NilpotentFactors factor_nilpotent(const Realization& R, const Mat& n, const PositiveSystem& P,
                                  const std::optional<QVector>& Z_q = std::nullopt);

struct PHSplit {
  Mat l;
  Mat n;
};

/// p = l n with l in L and H, n in N_P and H. Throws NotInPH.
PHSplit check_PH_split(const Realization& R, const Mat& p, const PositiveSystem& P, double tol = 1e-10);

/// Random element of N_Q and N-bar_P, built from the root spaces of Sigma(Q) and -Sigma(P).
Mat sample_gk(const Realization& R, const PositiveSystem& P, const PositiveSystem& Q, double scale,
              std::mt19937_64& rng);
/// H_P(x) for x in N_Q and N-bar_P. Throws NotInNP when log x leaves those root spaces.
Vec gk_sample(const Realization& R, const PositiveSystem& P, const PositiveSystem& Q, const Mat& x);

/// Deterministic seed splitting (splitmix64).
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

}  // namespace symconv

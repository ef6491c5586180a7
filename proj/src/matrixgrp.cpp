#include "symconv/matrixgrp.hpp"

#include "symconv/error.hpp"
#include "symconv/polyhedra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>

namespace symconv {

namespace {

Mat unit(int n, int r, int c) {
  Mat E = Mat::Zero(n, n);
  E(r, c) = 1;
  return E;
}

Mat rot90(int n, int offset) {
  Mat m = Mat::Identity(n, n);
  m(offset, offset) = 0;
  m(offset + 1, offset + 1) = 0;
  m(offset, offset + 1) = 1;
  m(offset + 1, offset) = -1;
  return m;
}

}  // namespace

std::vector<Mat> orthonormalize(const Realization& R, const std::vector<Mat>& cand) {
  std::vector<Mat> out;
  for (Mat v : cand) {
    // twice, for stability
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : out) v -= R.inner(u, v) * u;
    double nn = std::sqrt(std::max(0.0, R.inner(v, v)));
    if (nn < 1e-10) continue;
    out.push_back(v / nn);
  }
  return out;
}

std::vector<std::string> Realization::preset_names() { return {"kostant_sl2", "sl2_so11", "sl3_so21", "group_sl2"}; }

Realization Realization::preset(const std::string& name) {
  Realization R;
  R.name = name;
  if (name == "kostant_sl2" || name == "sl2_so11") {
    R.n = 2;
    R.killing_scale = 4;
    R.blocks = {{0, 2}};
    R.basis_a_diag = {QVector{1, -1}};
    R.base_chamber = QVector{1};
    R.z_reps = {Mat::Identity(2, 2), -Mat::Identity(2, 2)};
    if (name == "kostant_sl2") {
      R.kind = SigmaKind::Cartan;
      R.datum = std::make_shared<const SymmetricPairDatum>(datums::kostant_sl2());
      R.basis_kh = {unit(2, 0, 1) - unit(2, 1, 0)};
      R.normalizer_gens = {rot90(2, 0)};
    } else {
      R.kind = SigmaKind::ConjugatedCartan;
      R.J = Vec::Map(std::vector<double>{1, -1}.data(), 2).asDiagonal();
      R.datum = std::make_shared<const SymmetricPairDatum>(datums::sl2_so11());
      R.basis_ph = {unit(2, 0, 1) + unit(2, 1, 0)};
    }
  } else if (name == "sl3_so21") {
    R.n = 3;
    R.killing_scale = 6;
    R.blocks = {{0, 3}};
    R.kind = SigmaKind::ConjugatedCartan;
    R.J = Vec::Map(std::vector<double>{1, 1, -1}.data(), 3).asDiagonal();
    R.datum = std::make_shared<const SymmetricPairDatum>(datums::sl3_so21());
    R.basis_a_diag = {QVector{1, -1, 0}, QVector{0, 1, -1}};
    R.base_chamber = QVector{1, 1};
    R.basis_kh = {unit(3, 0, 1) - unit(3, 1, 0)};
    R.basis_ph = {unit(3, 0, 2) + unit(3, 2, 0), unit(3, 1, 2) + unit(3, 2, 1)};
    for (auto d : {std::array<double, 3>{1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}})
      R.z_reps.push_back(Vec::Map(d.data(), 3).asDiagonal());
    Mat x = Mat::Zero(3, 3);
    x(0, 1) = 1;
    x(1, 0) = 1;
    x(2, 2) = -1;
    R.normalizer_gens = {x};
  } else if (name == "group_sl2") {
    R.n = 4;
    R.killing_scale = 4;
    R.blocks = {{0, 2}, {2, 2}};
    R.kind = SigmaKind::Swap;
    R.J = Mat::Zero(4, 4);
    R.J.block(0, 2, 2, 2) = Mat::Identity(2, 2);
    R.J.block(2, 0, 2, 2) = Mat::Identity(2, 2);
    R.datum = std::make_shared<const SymmetricPairDatum>(datums::group_sl2());
    R.basis_a_diag = {QVector{1, -1, 0, 0}, QVector{0, 0, 1, -1}};
    R.base_chamber = QVector{2, 1};
    R.basis_kh = {unit(4, 0, 1) - unit(4, 1, 0) + unit(4, 2, 3) - unit(4, 3, 2)};
    R.basis_ph = {unit(4, 0, 1) + unit(4, 1, 0) + unit(4, 2, 3) + unit(4, 3, 2),
                  unit(4, 0, 0) - unit(4, 1, 1) + unit(4, 2, 2) - unit(4, 3, 3)};
    R.z_reps = {Mat::Identity(4, 4), -Mat::Identity(4, 4)};
    Mat x = rot90(4, 0);
    x.block(2, 2, 2, 2) = x.block(0, 0, 2, 2);
    R.normalizer_gens = {x};
  } else {
    throw Error(ErrorCode::ConfigError, "unknown preset " + name);
  }
  R.finalize();
  return R;
}

Mat Realization::sigma(const Mat& X) const {
  switch (kind) {
    case SigmaKind::Cartan: return -X.transpose();
    case SigmaKind::ConjugatedCartan: return -J * X.transpose() * J;
    case SigmaKind::Swap: return J * X * J;
  }
  return X;
}

Mat Realization::sigma_group(const Mat& g) const {
  switch (kind) {
    case SigmaKind::Cartan: return g.inverse().transpose();
    case SigmaKind::ConjugatedCartan: return J * g.inverse().transpose() * J;
    case SigmaKind::Swap: return J * g * J;
  }
  return g;
}

Mat Realization::a_matrix(const Vec& coords) const {
  Mat X = Mat::Zero(n, n);
  for (std::size_t k = 0; k < basis_a.size(); ++k) X += coords(static_cast<Eigen::Index>(k)) * basis_a[k];
  return X;
}

Vec Realization::a_coords(const Mat& X) const { return a_solver_ * Vec(X.diagonal()); }

Mat Realization::root_vector(std::size_t root, std::size_t k) const {
  const auto& u = root_units.at(root).at(k);
  return unit(n, u.row, u.col);
}

std::vector<MatrixUnit> Realization::units_np(const PositiveSystem& P) const {
  std::vector<MatrixUnit> out;
  for (auto i : P.positive())
    for (const auto& u : root_units[i]) out.push_back(u);
  return out;
}

std::vector<Mat> Realization::basis_np(const PositiveSystem& P) const {
  std::vector<Mat> out;
  for (const auto& u : units_np(P)) out.push_back(unit(n, u.row, u.col));
  return out;
}

std::vector<Mat> Realization::basis_np_h(const PositiveSystem& P) const {
  std::vector<Mat> cand;
  for (auto i : P.sigma_part())
    for (const auto& u : root_units[i]) cand.push_back(pi_h(unit(n, u.row, u.col)));
  return orthonormalize(*this, cand);
}

void Realization::finalize() {
  const std::size_t r = basis_a_diag.size();
  basis_a.clear();
  Mat D(n, static_cast<Eigen::Index>(r));
  for (std::size_t k = 0; k < r; ++k) {
    Vec d = to_eigen(basis_a_diag[k]);
    basis_a.push_back(d.asDiagonal());
    D.col(static_cast<Eigen::Index>(k)) = d;
  }
  a_solver_ = (D.transpose() * D).inverse() * D.transpose();

  root_units.assign(datum->size(), {});
  for (const auto& [start, size] : blocks)
    for (int p = start; p < start + size; ++p)
      for (int q = start; q < start + size; ++q) {
        if (p == q) continue;
        QVector f(r);
        for (std::size_t k = 0; k < r; ++k) f[k] = basis_a_diag[k][p] - basis_a_diag[k][q];
        auto idx = datum->find(f);
        if (!idx) throw Error(ErrorCode::RealizationError, "matrix unit weight is not a root of the datum");
        root_units[*idx].push_back(MatrixUnit{p, q});
      }

  RestrictedRootDatum rr = restricted_roots(*datum);
  w_kh_ = weyl_group(rr.plus_set(), datum->gram_inverse(), datum->dim());

  // representatives x_w: enumerate the finite group generated by normalizer_gens and z_reps
  Mat prq = pr_q();
  weyl_reps_.assign(w_kh_.order(), Mat());
  std::vector<bool> found(w_kh_.order(), false);
  std::vector<Mat> gens = normalizer_gens;
  for (const auto& z : z_reps) gens.push_back(z);
  std::vector<Mat> seen{Mat::Identity(n, n)};
  std::deque<Mat> queue{Mat::Identity(n, n)};
  while (!queue.empty() && seen.size() < 512) {
    Mat x = queue.front();
    queue.pop_front();
    Mat act(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t k = 0; k < r; ++k) act.col(static_cast<Eigen::Index>(k)) = a_coords(x * basis_a[k] * x.transpose());
    for (std::size_t w = 0; w < w_kh_.order(); ++w) {
      if (found[w]) continue;
      if (((act - to_eigen(w_kh_.elements[w])) * prq).cwiseAbs().maxCoeff() < 1e-9) {
        found[w] = true;
        weyl_reps_[w] = x;
      }
    }
    for (const auto& g : gens) {
      Mat y = x * g;
      bool dup = false;
      for (const auto& s : seen) dup = dup || (s - y).cwiseAbs().maxCoeff() < 1e-9;
      if (dup) continue;
      seen.push_back(y);
      queue.push_back(y);
    }
  }
  for (std::size_t w = 0; w < w_kh_.order(); ++w)
    if (!found[w]) throw Error(ErrorCode::RealizationError, "no representative for Weyl element " + w_kh_.name(w));

  std::vector<Mat> cand;
  for (const auto& units : root_units)
    for (const auto& u : units) cand.push_back(pi_h(unit(n, u.row, u.col)));
  for (const auto& b : basis_a) cand.push_back(pi_h(b));
  basis_h_ = orthonormalize(*this, cand);
}

void Realization::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::RealizationError, m); };
  const auto& d = *datum;
  const std::size_t r = d.dim();
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> N01;
  for (int t = 0; t < 1000; ++t) {
    Mat X(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) X(i, j) = N01(rng);
    if ((sigma(theta(X)) - theta(sigma(X))).cwiseAbs().maxCoeff() > 1e-12) fail("sigma and theta do not commute");
    if ((sigma(sigma(X)) - X).cwiseAbs().maxCoeff() > 1e-12) fail("sigma is not an involution");
  }
  Mat G = to_eigen(d.gram()), S = to_eigen(d.sigma_on_a());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j)
      if (std::abs(B(basis_a[i], basis_a[j]) - G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > 1e-12)
        fail("Killing form on a differs from the gram matrix");
    Mat expect = Mat::Zero(n, n);
    for (std::size_t j = 0; j < r; ++j) expect += S(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * basis_a[j];
    if ((sigma(basis_a[i]) - expect).cwiseAbs().maxCoeff() > 1e-12) fail("sigma on a differs from the datum");
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& m = d.mult(i);
    if (static_cast<int>(root_units[i].size()) != m.dim) fail("root space dimension differs from the datum");
    if (d.sigmatheta_image(i) != i) continue;
    int plus = 0, minus = 0;
    for (const auto& u : root_units[i]) {
      Mat E = unit(n, u.row, u.col);
      Mat st = sigma(theta(E));
      if ((st - E).cwiseAbs().maxCoeff() < 1e-12) ++plus;
      else if ((st + E).cwiseAbs().maxCoeff() < 1e-12) ++minus;
      else fail("matrix unit is not a sigma theta eigenvector");
    }
    if (!m.plus || plus != *m.plus || minus != *m.minus) fail("signed multiplicities differ from the datum");
  }
  Mat prq = pr_q();
  for (std::size_t w = 0; w < w_kh_.order(); ++w) {
    const Mat& x = weyl_reps_[w];
    if ((x.transpose() * x - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) fail("x_w not orthogonal");
    if ((sigma_group(x) - x).cwiseAbs().maxCoeff() > 1e-12) fail("x_w not fixed by sigma");
    for (const auto& q : d.a_q_basis()) {
      Mat Y = a_matrix(to_eigen(q));
      Mat Z = x * Y * x.transpose();
      if ((Mat(Z.diagonal().asDiagonal()) - Z).cwiseAbs().maxCoeff() > 1e-12) fail("x_w does not normalize a_q");
    }
  }
  for (const auto& z : z_reps) {
    if ((z.transpose() * z - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) fail("z not orthogonal");
    if ((sigma_group(z) - z).cwiseAbs().maxCoeff() > 1e-12) fail("z not fixed by sigma");
    for (const auto& q : d.a_q_basis()) {
      Mat Y = a_matrix(to_eigen(q));
      if ((z * Y - Y * z).cwiseAbs().maxCoeff() > 1e-12) fail("z does not centralize a_q");
    }
  }
  for (const auto& Y : basis_kh)
    if ((sigma(Y) - Y).cwiseAbs().maxCoeff() > 1e-12 || (Y + Y.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      fail("sampling basis of k and h is wrong");
  for (const auto& Y : basis_ph)
    if ((sigma(Y) - Y).cwiseAbs().maxCoeff() > 1e-12 || (Y - Y.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      fail("sampling basis of p and h is wrong");
  if (basis_kh.size() + basis_ph.size() != basis_h_.size()) fail("sampling basis does not span h");
  (void)prq;
}

std::vector<int> parabolic_permutation(const Realization& R, const PositiveSystem& P) {
  const auto& Z = P.chamber_vector();
  std::vector<Rational> d(static_cast<std::size_t>(R.n));
  for (int i = 0; i < R.n; ++i)
    for (std::size_t k = 0; k < Z.size(); ++k) d[static_cast<std::size_t>(i)] += Z[k] * R.basis_a_diag[k][i];
  std::vector<int> perm(static_cast<std::size_t>(R.n));
  std::iota(perm.begin(), perm.end(), 0);
  for (const auto& [start, size] : R.blocks)
    std::sort(perm.begin() + start, perm.begin() + start + size,
              [&](int a, int b) { return d[static_cast<std::size_t>(a)] > d[static_cast<std::size_t>(b)]; });
  return perm;
}

Mat permutation_matrix(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  Mat W = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) W(perm[static_cast<std::size_t>(j)], j) = 1;
  return W;
}

IwasawaTriple iwasawa(const Realization& R, const Mat& g, const PositiveSystem& P) {
  if (g.rows() != R.n || g.cols() != R.n) throw Error(ErrorCode::SingularInput, "matrix has wrong size");
  if (!g.allFinite()) throw Error(ErrorCode::SingularInput, "non-finite entries");
  const Mat W = permutation_matrix(parabolic_permutation(R, P));
  const Mat gp = W.transpose() * g * W;
  Eigen::HouseholderQR<Mat> qr(gp);
  Mat Rm = qr.matrixQR().triangularView<Eigen::Upper>();
  Mat Q = qr.householderQ();
  for (int i = 0; i < R.n; ++i) {
    if (Rm(i, i) == 0) throw Error(ErrorCode::SingularInput, "matrix is singular");
    if (Rm(i, i) < 0) {
      Rm.row(i) *= -1;
      Q.col(i) *= -1;
    }
  }
  Vec diag = Rm.diagonal();
  Mat np = diag.cwiseInverse().asDiagonal() * Rm;
  Vec logd = diag.array().log();
  // det = 1 on every block: the last diagonal entry is the least accurate, so pin it
  for (const auto& [start, size] : R.blocks) {
    double s = logd.segment(start, size).sum();
    if (std::abs(s) > 1e-6) throw Error(ErrorCode::InvalidArgument, "block determinant differs from 1");
    logd(start + size - 1) -= s;
  }
  Vec perm_back = W * logd;  // entry perm[j] receives logd[j]
  IwasawaTriple t;
  t.k = W * Q * W.transpose();
  t.n = W * np * W.transpose();
  t.H = R.a_coords(Mat(perm_back.asDiagonal()));
  Eigen::JacobiSVD<Mat> svd(g);
  const auto& sv = svd.singularValues();
  t.condition = sv(0) / sv(sv.size() - 1);
  t.ill_conditioned = !(t.condition < kConditionLimit);
  return t;
}

Vec iwasawa_H(const Realization& R, const Mat& g, const PositiveSystem& P) { return iwasawa(R, g, P).H; }

Vec h_pq(const Realization& R, const Mat& g, const PositiveSystem& P) { return R.pr_q() * iwasawa_H(R, g, P); }

Mat project_k(const Mat& X, const std::vector<int>& perm) {
  const Mat W = permutation_matrix(perm);
  Mat Xp = W.transpose() * X * W;
  Mat L = Xp.triangularView<Eigen::StrictlyLower>();
  return W * (L - L.transpose()) * W.transpose();
}

Mat project_np(const Mat& X, const std::vector<int>& perm) {
  const Mat W = permutation_matrix(perm);
  Mat Xp = W.transpose() * X * W;
  Mat L = Xp.triangularView<Eigen::StrictlyLower>();
  Mat U = Xp.triangularView<Eigen::StrictlyUpper>();
  return W * (U + L.transpose()) * W.transpose();
}

Mat exp_nilpotent(const Mat& N) {
  const auto n = N.rows();
  Mat out = Mat::Identity(n, n), term = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    term = term * N / static_cast<double>(k);
    out += term;
  }
  return out;
}

Mat log_unipotent(const Mat& u) {
  const auto n = u.rows();
  Mat N = u - Mat::Identity(n, n);
  Mat p = Mat::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) p = p * N;
  double scale = std::max(1.0, N.cwiseAbs().maxCoeff());
  if (p.cwiseAbs().maxCoeff() > 1e-9 * std::pow(scale, static_cast<double>(n)))
    throw Error(ErrorCode::NotUnipotent, "matrix is not unipotent");
  Mat out = Mat::Zero(n, n), term = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    term = term * N;
    out += ((k % 2) ? 1.0 : -1.0) / static_cast<double>(k) * term;
  }
  return out;
}

Mat expm(const Mat& X) { return X.exp(); }

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

Vec gaussian(std::mt19937_64& rng, std::size_t k, double sd) {
  std::normal_distribution<double> N(0.0, sd);
  Vec c(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) c(static_cast<Eigen::Index>(i)) = N(rng);
  return c;
}

void clip(Vec& c, double radius) {
  double nn = c.norm();
  if (nn > radius) c *= (nn > 0 ? radius / nn : 0.0);
}

Mat combine(const std::vector<Mat>& basis, const Vec& c, int n) {
  Mat Y = Mat::Zero(n, n);
  for (std::size_t i = 0; i < basis.size(); ++i) Y += c(static_cast<Eigen::Index>(i)) * basis[i];
  return Y;
}

}  // namespace

std::vector<HSample> sample_H(const Realization& R, double radius, std::size_t count, std::uint64_t seed,
                              const SamplingOptions& opts) {
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "negative radius");
  std::mt19937_64 rng(seed);
  const double sk = opts.std_k > 0 ? opts.std_k : radius / 2;
  const double sp = opts.std_p > 0 ? opts.std_p : radius / 2;
  std::uniform_int_distribution<std::size_t> pick(0, R.z_reps.size() - 1);
  std::vector<HSample> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    HSample hs;
    hs.z_index = pick(rng);
    hs.coeff_k = gaussian(rng, R.basis_kh.size(), sk);
    hs.coeff_p = gaussian(rng, R.basis_ph.size(), sp);
    const Mat& z = R.z_reps[hs.z_index];
    if (opts.mode == SamplingMode::Exponential) {
      Vec all(hs.coeff_k.size() + hs.coeff_p.size());
      all << hs.coeff_k, hs.coeff_p;
      clip(all, radius);
      hs.coeff_k = all.head(hs.coeff_k.size());
      hs.coeff_p = all.tail(hs.coeff_p.size());
      Mat Y = combine(R.basis_kh, hs.coeff_k, R.n) + combine(R.basis_ph, hs.coeff_p, R.n);
      hs.h = z * expm(Y);
    } else {
      clip(hs.coeff_k, radius);
      clip(hs.coeff_p, radius);
      hs.h = z * expm(combine(R.basis_kh, hs.coeff_k, R.n)) * expm(combine(R.basis_ph, hs.coeff_p, R.n));
    }
    out.push_back(std::move(hs));
  }
  return out;
}

Mat sample_NP(const Realization& R, const PositiveSystem& P, double scale, std::mt19937_64& rng) {
  auto basis = R.basis_np(P);
  Vec c = gaussian(rng, basis.size(), scale);
  return exp_nilpotent(combine(basis, c, R.n));
}

namespace {

// Z_P nudged inside its chamber so that Z_P + sigma theta Z_P is regular in a_q
QVector nudged_chamber(const PositiveSystem& P) {
  const auto& d = P.datum();
  const std::size_t r = d.dim();
  RestrictedRootDatum rr = restricted_roots(d);
  QVector pert(r);
  for (std::size_t i = 0; i < r; ++i) pert[i] = ratio(static_cast<long>(i) + 1, 7 + static_cast<long>(i));
  for (int k = 0; k < 64; ++k) {
    QVector Z = P.chamber_vector();
    if (k > 0) Z = Z + ratio(1, 1L << std::min(k, 60)) * pert;
    bool same = true;
    for (std::size_t i = 0; i < d.size(); ++i) same = same && ((sgn(dot(d.root(i), Z)) > 0) == P.contains(i));
    if (!same) continue;
    QVector Zq = Z + d.sigmatheta_on_a() * Z;
    bool regular = true;
    for (const auto& f : rr.all()) regular = regular && sgn(dot(f, Zq)) != 0;
    if (regular) return Z;
  }
  throw Error(ErrorCode::NotRegular, "could not find a regular Z_q");
}

Mat component(const Mat& Y, const std::vector<MatrixUnit>& units) {
  Mat C = Mat::Zero(Y.rows(), Y.cols());
  for (const auto& u : units) C(u.row, u.col) = Y(u.row, u.col);
  return C;
}

// Peels r level by level; split maps a level component to (left part, right part).
template <class Split>
void graded_peel(const Realization& R, Mat r, const std::vector<std::pair<Rational, std::size_t>>& levels, Split split,
                 Mat& left, Mat& right) {
  left = Mat::Identity(R.n, R.n);
  right = Mat::Identity(R.n, R.n);
  std::size_t i = 0;
  while (i < levels.size()) {
    std::size_t j = i;
    while (j < levels.size() && levels[j].first == levels[i].first) ++j;
    Mat Y = log_unipotent(r);
    Mat Y1 = Mat::Zero(R.n, R.n), Y2 = Mat::Zero(R.n, R.n);
    for (std::size_t k = i; k < j; ++k) split(levels[k].second, component(Y, R.root_units[levels[k].second]), Y1, Y2);
    r = exp_nilpotent(-Y1) * r * exp_nilpotent(-Y2);
    left = left * exp_nilpotent(Y1);
    right = exp_nilpotent(Y2) * right;
    i = j;
  }
}

}  // namespace

QVector default_zq(const PositiveSystem& P) {
  QVector Z = nudged_chamber(P);
  return Z + P.datum().sigmatheta_on_a() * Z;
}

NilpotentFactors factor_nilpotent(const Realization& R, const Mat& n, const PositiveSystem& P,
                                  const std::optional<QVector>& Z_q) {
  const auto& d = P.datum();
  Mat Y = log_unipotent(n);
  Mat outside = Y - component(Y, R.units_np(P));
  if (outside.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, Y.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::NotInNP, "log n has components outside n_P");

  const QVector Zp = nudged_chamber(P);
  QVector Zq = Z_q ? *Z_q : Zp + d.sigmatheta_on_a() * Zp;
  if (Z_q) {
    if (!(d.sigma_on_a() * Zq == -Zq)) throw Error(ErrorCode::InvalidArgument, "Z_q must lie in a_q");
    for (auto i : P.sigmatheta_part())
      if (sgn(dot(d.root(i), Zq)) <= 0) throw Error(ErrorCode::InvalidArgument, "Z_q not positive on Sigma(P, sigma theta)");
    for (const auto& f : restricted_roots(d).all())
      if (sgn(dot(f, Zq)) == 0) throw Error(ErrorCode::NotRegular, "Z_q is not regular");
  }
  const QVector Zh = Zp + d.sigma_on_a() * Zp;

  // N_P = N_{P,sigma theta} N_{P,sigma}, graded by Z_P
  std::vector<std::pair<Rational, std::size_t>> lv;
  for (auto i : P.positive()) lv.emplace_back(dot(d.root(i), Zp), i);
  std::sort(lv.begin(), lv.end());
  const auto& st = P.sigmatheta_part();
  Mat n1, n2;
  graded_peel(R, n, lv,
              [&](std::size_t root, const Mat& C, Mat& Y1, Mat& Y2) {
                if (std::binary_search(st.begin(), st.end(), root)) Y1 += C;
                else Y2 += C;
              },
              n1, n2);

  // N_{P,sigma} = N_{P,sigma,+} (N_P and H), graded by Z_h
  std::vector<std::pair<Rational, std::size_t>> lh;
  for (auto i : P.sigma_part()) lh.emplace_back(dot(d.root(i), Zh), i);
  std::sort(lh.begin(), lh.end());
  Mat a2, b2;
  graded_peel(R, n2, lh,
              [&](std::size_t root, const Mat& C, Mat& Yp, Mat& Yh) {
                int s = sgn(dot(d.root(root), Zq));
                if (s > 0) {
                  Yp += C;
                } else if (s == 0) {
                  Yh += C;
                } else {
                  Mat sC = R.sigma(C);
                  Yh += C + sC;
                  Yp -= sC;
                }
              },
              a2, b2);
  return NilpotentFactors{n1 * a2, b2};
}

PHSplit check_PH_split(const Realization& R, const Mat& p, const PositiveSystem& P, double tol) {
  if ((R.sigma_group(p) - p).cwiseAbs().maxCoeff() > tol) throw Error(ErrorCode::NotInPH, "p is not fixed by sigma");
  const Mat W = permutation_matrix(parabolic_permutation(R, P));
  Mat pp = W.transpose() * p * W;
  Mat low = pp.triangularView<Eigen::StrictlyLower>();
  if (low.cwiseAbs().maxCoeff() > tol) throw Error(ErrorCode::NotInPH, "p is not in P");
  Vec dg = pp.diagonal();
  Mat lp = dg.asDiagonal();
  Mat np = dg.cwiseInverse().asDiagonal() * Mat(pp.triangularView<Eigen::Upper>());
  PHSplit s{W * lp * W.transpose(), W * np * W.transpose()};
  if ((R.sigma_group(s.l) - s.l).cwiseAbs().maxCoeff() > tol || (R.sigma_group(s.n) - s.n).cwiseAbs().maxCoeff() > tol)
    throw Error(ErrorCode::NotInPH, "Langlands factors are not fixed by sigma");
  return s;
}

namespace {

std::vector<MatrixUnit> gk_units(const Realization& R, const PositiveSystem& P, const PositiveSystem& Q) {
  std::vector<MatrixUnit> out;
  for (auto i : gk_roots(P, Q))
    for (const auto& u : R.root_units[P.datum().negative(i)]) out.push_back(u);
  return out;
}

}  // namespace

Mat sample_gk(const Realization& R, const PositiveSystem& P, const PositiveSystem& Q, double scale,
              std::mt19937_64& rng) {
  auto units = gk_units(R, P, Q);
  Vec c = gaussian(rng, units.size(), scale);
  Mat Y = Mat::Zero(R.n, R.n);
  for (std::size_t i = 0; i < units.size(); ++i) Y(units[i].row, units[i].col) = c(static_cast<Eigen::Index>(i));
  return exp_nilpotent(Y);
}

Vec gk_sample(const Realization& R, const PositiveSystem& P, const PositiveSystem& Q, const Mat& x) {
  Mat Y = log_unipotent(x);
  Mat outside = Y - component(Y, gk_units(R, P, Q));
  if (outside.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, Y.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::NotInNP, "log x leaves the root spaces of Sigma(Q) and -Sigma(P)");
  return iwasawa_H(R, x, P);
}

}  // namespace symconv

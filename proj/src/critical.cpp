#include "symconv/critical.hpp"

#include "symconv/error.hpp"

#include <algorithm>
#include <cmath>

namespace symconv {

namespace {

Vec coords_in(const Realization& R, const std::vector<Mat>& basis, const Mat& M) {
  Vec c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) c(static_cast<Eigen::Index>(i)) = R.inner(basis[i], M);
  return c;
}

std::size_t numeric_rank(const Mat& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& s = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return r;
}

bool in_aq(const SymmetricPairDatum& d, const QVector& x) { return d.sigma_on_a() * x == -x; }

}  // namespace

CriticalInput::CriticalInput(const Realization& R_, PositiveSystem P_, QVector a_log_, QVector X_)
    : R(&R_), P(std::move(P_)), a_log(std::move(a_log_)), X(std::move(X_)) {
  const auto& d = *R->datum;
  if (a_log.size() != d.dim() || X.size() != d.dim()) throw Error(ErrorCode::InvalidArgument, "wrong dimension");
  if (!in_aq(d, a_log)) throw Error(ErrorCode::InvalidArgument, "log a is not in a_q");
  if (!in_aq(d, X)) throw Error(ErrorCode::InvalidArgument, "X is not in a_q");
}

Mat CriticalInput::a_group() const {
  Vec dg = R->a_matrix(to_eigen(a_log)).diagonal();
  return Vec(dg.array().exp()).asDiagonal();
}

Mat CriticalInput::X_matrix() const { return R->a_matrix(to_eigen(X)); }

WeylGroup weyl_group_kh(const SymmetricPairDatum& d) {
  return weyl_group(restricted_roots(d).plus_set(), d.gram_inverse(), d.dim());
}

bool is_regular(const SymmetricPairDatum& d, const QVector& a_log) {
  for (const auto& f : restricted_roots(d).all())
    if (sgn(dot(f, a_log)) == 0) return false;
  return true;
}

FExpressions F_expressions(const CriticalInput& in, const Mat& h) {
  const auto& R = *in.R;
  Vec H = iwasawa_H(R, in.a_group() * h, in.P);
  Vec Hq = R.pr_q() * H;
  Mat G = to_eigen(in.datum().gram());
  Vec x = to_eigen(in.X);
  return FExpressions{x.dot(G * H), x.dot(G * Hq), R.B(in.X_matrix(), R.a_matrix(Hq))};
}

double F(const CriticalInput& in, const Mat& h) {
  Vec H = iwasawa_H(*in.R, in.a_group() * h, in.P);
  return to_eigen(in.X).dot(to_eigen(in.datum().gram()) * H);
}

Vec grad_F(const CriticalInput& in, const Mat& h) {
  const auto& R = *in.R;
  Mat nu = iwasawa(R, in.a_group() * h, in.P).n;
  Mat AdX = nu.inverse() * in.X_matrix() * nu;
  const auto& basis = R.basis_h();
  Vec g(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) g(static_cast<Eigen::Index>(i)) = R.B(basis[i], AdX);
  return g;
}

Vec grad_F_numeric(const CriticalInput& in, const Mat& h, double step) {
  const auto& basis = in.R->basis_h();
  Vec g(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto D = [&](double e) {
      return (F(in, h * expm(e * basis[i])) - F(in, h * expm(-e * basis[i]))) / (2 * e);
    };
    g(static_cast<Eigen::Index>(i)) = (4 * D(step / 2) - D(step)) / 3;
  }
  return g;
}

std::vector<CriticalRep> critical_reps(const CriticalInput& in) {
  const auto& d = in.datum();
  if (!is_regular(d, in.a_log)) throw Error(ErrorCode::NotRegular, "log a is not regular in a_q");
  const auto& W = in.R->w_kh();
  std::vector<CriticalRep> out;
  for (std::size_t w = 0; w < W.order(); ++w)
    out.push_back(CriticalRep{w, W.name(w), in.R->weyl_rep(w), d.inner(in.X, inverse(W.elements[w]) * in.a_log)});
  return out;
}

std::vector<Mat> basis_h_X(const CriticalInput& in) {
  const auto& R = *in.R;
  const auto& basis = R.basis_h();
  const Mat X = in.X_matrix();
  const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
  if (m == 0) return {};
  Mat M(R.n * R.n, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Mat C = X * basis[static_cast<std::size_t>(i)] - basis[static_cast<std::size_t>(i)] * X;
    M.col(i) = Eigen::Map<const Vec>(C.data(), C.size());
  }
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double tol = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  std::vector<Mat> out;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (k < s.size() && s(k) > tol) continue;
    Mat Y = Mat::Zero(R.n, R.n);
    for (Eigen::Index i = 0; i < m; ++i) Y += svd.matrixV()(i, k) * basis[static_cast<std::size_t>(i)];
    out.push_back(Y);
  }
  return orthonormalize(R, out);
}

std::size_t kernel_dim_numeric(const CriticalInput& in) {
  const auto& R = *in.R;
  std::vector<Mat> span = basis_h_X(in);
  for (const auto& Y : R.basis_np_h(in.P)) span.push_back(Y);
  Mat C(static_cast<Eigen::Index>(R.basis_h().size()), static_cast<Eigen::Index>(span.size()));
  for (std::size_t k = 0; k < span.size(); ++k) C.col(static_cast<Eigen::Index>(k)) = coords_in(R, R.basis_h(), span[k]);
  return numeric_rank(C, 1e-9);
}

std::string case_tag(OrbitCase c) {
  switch (c) {
    case OrbitCase::A: return "a";
    case OrbitCase::B1: return "b.1";
    case OrbitCase::B21: return "b.2.1";
    case OrbitCase::B22: return "b.2.2";
  }
  return "?";
}

SignaturePrediction predicted_signature(const CriticalInput& in, std::size_t w) {
  const auto& d = in.datum();
  const auto& P = in.P;
  if (!is_regular(d, in.a_log)) throw Error(ErrorCode::NotRegular, "log a is not regular in a_q");
  const auto& W = in.R->w_kh();
  if (w >= W.order()) throw Error(ErrorCode::InvalidArgument, "Weyl index out of range");
  const QVector wlog = inverse(W.elements[w]) * in.a_log;

  SignaturePrediction out;
  auto [plus, minus] = plus_minus(P);
  for (auto i : plus) out.condition_a = out.condition_a && sgn(dot(d.root(i), in.X) * dot(d.root(i), wlog)) <= 0;
  for (auto i : minus) out.condition_b = out.condition_b && sgn(dot(d.root(i), in.X)) >= 0;
  out.posdef = out.condition_a && out.condition_b;

  std::vector<bool> done(d.size(), false);
  std::size_t transversal = 0;
  for (auto i : P.positive()) {
    if (done[i]) continue;
    OrbitCertificate c;
    c.root = i;
    for (auto j : {i, d.negative(i), d.sigma_image(i), d.negative(d.sigma_image(i))}) {
      if (!done[j]) c.orbit.push_back(j);
      done[j] = true;
    }
    std::sort(c.orbit.begin(), c.orbit.end());
    c.alpha_X = dot(d.root(i), in.X);
    c.alpha_wlog = dot(d.root(i), wlog);
    const double ax = c.alpha_X.get_d(), y = c.alpha_wlog.get_d();
    const double em = std::exp(-2 * y), ep = std::exp(2 * y);
    const auto& m = d.mult(i);
    const int sx = sgn(c.alpha_X), sxy = sgn(c.alpha_X * c.alpha_wlog);
    if (sx == 0) {
      c.kind = OrbitCase::A;
      c.formula = "v_O = 0";
    } else if (std::binary_search(P.sigma_part().begin(), P.sigma_part().end(), i)) {
      c.kind = OrbitCase::B1;
      c.formula = "(alpha(X)/2)(a^(-2w alpha) - a^(2w alpha)) I";
      c.eigenvalues.assign(static_cast<std::size_t>(m.dim), ax / 2 * (em - ep));
      c.posdef = sxy < 0;
    } else if (!d.in_aq_star(i)) {
      c.kind = OrbitCase::B21;
      c.formula = "(alpha(X)/2)[[a^(-2w alpha), -1], [-1, a^(-2w alpha)]]";
      for (int k = 0; k < m.dim; ++k) {
        c.eigenvalues.push_back(ax / 2 * (em - 1));
        c.eigenvalues.push_back(ax / 2 * (em + 1));
      }
      c.posdef = sx > 0 && sxy < 0;
    } else {
      c.kind = OrbitCase::B22;
      c.formula = "C+ = (alpha(X)/2)(a^(-2w alpha) - 1) on g_{alpha,+}, C- = (alpha(X)/2)(a^(-2w alpha) + 1) on g_{alpha,-}";
      const int dp = m.plus.value_or(0), dm = m.minus.value_or(0);
      c.eigenvalues.insert(c.eigenvalues.end(), static_cast<std::size_t>(dp), ax / 2 * (em - 1));
      c.eigenvalues.insert(c.eigenvalues.end(), static_cast<std::size_t>(dm), ax / 2 * (em + 1));
      c.posdef = (dp == 0 || sxy < 0) && (dm == 0 || sx > 0);
    }
    transversal += c.eigenvalues.size();
    for (double e : c.eigenvalues) (e > 0 ? out.n_plus : out.n_minus) += 1;
    out.orbits.push_back(std::move(c));
  }
  out.transversal_dim = transversal;
  const std::size_t dim_h = in.R->basis_h().size();
  out.kernel_dim = dim_h >= transversal ? dim_h - transversal : 0;
  return out;
}

CriticalDatum critical_datum(const CriticalInput& in) {
  CriticalDatum cd{in.a_log, in.X, critical_reps(in), {}, {}};
  const std::size_t k = kernel_dim_numeric(in);
  for (const auto& r : cd.reps) {
    cd.predicted_posdef.push_back(predicted_signature(in, r.w).posdef);
    cd.kernel_dim.push_back(k);
  }
  return cd;
}

Signature signature_of(const Mat& M, double tol) {
  Signature s;
  if (M.size() == 0) return s;
  Mat S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  const double t = tol * std::max(1.0, S.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double e = es.eigenvalues()(i);
    if (e > t) ++s.n_plus;
    else if (e < -t) ++s.n_minus;
    else ++s.n_zero;
  }
  return s;
}

Mat hessian_analytic(const CriticalInput& in, std::size_t w) {
  const auto& R = *in.R;
  const auto& basis = R.basis_h();
  const Mat& x = R.weyl_rep(w);
  const Mat aw = x.transpose() * in.a_group() * x;  // x_w^-1 a x_w
  const Mat awi = aw.inverse();
  const Mat X = in.X_matrix();
  const auto perm = parabolic_permutation(R, in.P);
  auto L = [&](const Mat& V) {
    Mat Y = aw * V * awi;
    Y = project_k(Y, perm);
    Y = aw * Y * awi;
    Y = X * Y - Y * X;
    return Mat(-R.pi_h(Y));
  };
  const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
  Mat A(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Mat LV = L(basis[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < m; ++i) A(i, j) = R.inner(basis[static_cast<std::size_t>(i)], LV);
  }
  return A;
}

Mat hessian_numeric(const CriticalInput& in, std::size_t w, double step) {
  const auto& R = *in.R;
  const auto& basis = R.basis_h();
  const Mat& x = R.weyl_rep(w);
  const std::size_t m = basis.size();
  auto stencil = [&](double e) {
    std::vector<Mat> plus, minus;
    for (const auto& U : basis) {
      plus.push_back(expm(e * U));
      minus.push_back(expm(-e * U));
    }
    Mat D(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        double v = F(in, x * plus[i] * plus[j]) - F(in, x * plus[i] * minus[j]) - F(in, x * minus[i] * plus[j]) +
                   F(in, x * minus[i] * minus[j]);
        D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v / (4 * e * e);
      }
    return D;
  };
  return (4 * stencil(step / 2) - stencil(step)) / 3;
}

std::vector<Mat> orbit_frames(const CriticalInput& in) {
  const auto& R = *in.R;
  const auto& d = in.datum();
  std::vector<std::vector<Mat>> parts;
  {
    std::vector<Mat> cand;
    for (const auto& b : R.basis_a) cand.push_back(R.pi_h(b));
    parts.push_back(orthonormalize(R, cand));
  }
  std::vector<bool> done(d.size(), false);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (done[i]) continue;
    std::vector<Mat> cand;
    for (auto j : {i, d.negative(i), d.sigma_image(i), d.negative(d.sigma_image(i))}) {
      if (done[j]) continue;
      done[j] = true;
      for (const auto& u : R.root_units[j]) {
        Mat E = Mat::Zero(R.n, R.n);
        E(u.row, u.col) = 1;
        cand.push_back(R.pi_h(E));
      }
    }
    parts.push_back(orthonormalize(R, cand));
  }
  std::vector<Mat> frames;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    Mat F(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(R.basis_h().size()));
    for (std::size_t k = 0; k < p.size(); ++k) F.row(static_cast<Eigen::Index>(k)) = coords_in(R, R.basis_h(), p[k]).transpose();
    frames.push_back(F);
  }
  return frames;
}

double offdiag_block_max(const std::vector<Mat>& frames, const Mat& form) {
  double worst = 0;
  for (std::size_t p = 0; p < frames.size(); ++p)
    for (std::size_t q = 0; q < frames.size(); ++q)
      if (p != q) worst = std::max(worst, (frames[p] * form * frames[q].transpose()).cwiseAbs().maxCoeff());
  return worst;
}

HessianReport hessian(const CriticalInput& in, std::size_t w) {
  HessianReport r;
  r.prediction = predicted_signature(in, w);
  r.w = w;
  r.w_name = in.R->w_kh().name(w);
  r.analytic_form = hessian_analytic(in, w);
  r.numeric_form = hessian_numeric(in, w);
  r.signature = signature_of(r.numeric_form);
  r.analytic_signature = signature_of(r.analytic_form);
  r.kernel_dim = kernel_dim_numeric(in);
  const double scale = std::max(1.0, r.analytic_form.size() ? r.analytic_form.cwiseAbs().maxCoeff() : 0.0);
  r.max_rel_error = r.analytic_form.size() ? (r.numeric_form - r.analytic_form).cwiseAbs().maxCoeff() / scale : 0.0;
  auto frames = orbit_frames(in);
  r.offdiag_numeric = offdiag_block_max(frames, r.numeric_form);
  r.offdiag_analytic = offdiag_block_max(frames, r.analytic_form);
  if (r.analytic_form.size()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (r.analytic_form + r.analytic_form.transpose())));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r.analytic_eigenvalues.push_back(es.eigenvalues()(i));
  }
  r.posdef_numeric = r.signature.n_minus == 0;
  return r;
}

bool local_min_halfspace_check(const CriticalInput& in, std::size_t w) {
  const auto& d = in.datum();
  if (!predicted_signature(in, w).posdef)
    throw Error(ErrorCode::NotALocalMin, "the Hessian at x_w has a negative transversal block");
  const auto& W = in.R->w_kh();
  const Rational level = d.inner(in.X, inverse(W.elements[w]) * in.a_log);
  for (const auto& u : weyl_orbit(W, in.a_log))
    if (d.inner(in.X, u) < level) return false;
  for (const auto& g : gamma_cone(in.P).generators)
    if (sgn(d.inner(in.X, g)) < 0) return false;
  return true;
}

std::vector<PolyhedralSet> omega_X(const PositiveSystem& P, const QVector& a_log, const QVector& X) {
  const auto& d = P.datum();
  std::vector<QVector> zero_plus;
  for (const auto& f : restricted_roots(d).plus_set())
    if (sgn(dot(f, X)) == 0) zero_plus.push_back(f);
  WeylGroup WX = weyl_group(zero_plus, d.gram_inverse(), d.dim());
  std::vector<std::size_t> S;
  for (auto i : plus_minus(P).second)
    if (sgn(dot(d.root(i), X)) == 0) S.push_back(i);
  Cone gamma = gamma_aq(d, S);
  WeylGroup W = weyl_group_kh(d);
  std::vector<PolyhedralSet> out;
  for (const auto& w : W.elements) out.emplace_back(weyl_orbit(WX, inverse(w) * a_log), gamma);
  return out;
}

namespace {

bool has_pattern(const std::vector<QVector>& roots, const std::vector<std::size_t>& zero, const QVector& x) {
  if (x.is_zero()) return false;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    bool z = std::binary_search(zero.begin(), zero.end(), i);
    if ((sgn(dot(roots[i], x)) == 0) != z) return false;
  }
  return true;
}

}  // namespace

std::vector<VanishingPattern> vanishing_patterns(const SymmetricPairDatum& d) {
  const auto roots = restricted_roots(d).all();
  const std::size_t n = d.dim();
  // one representative per pair {f, -f}
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    bool seen = false;
    for (auto j : reps) seen = seen || roots[j] == -roots[i];
    if (!seen) reps.push_back(i);
  }
  if (reps.size() > 20) throw Error(ErrorCode::ClosureTooLarge, "too many restricted roots for pattern enumeration");
  const QMatrix to_q = d.sigma_on_a() + QMatrix::identity(n);
  std::vector<VanishingPattern> out;
  for (std::uint64_t mask = 0; mask < (1ULL << reps.size()); ++mask) {
    std::vector<QVector> rows;
    for (std::size_t r = 0; r < n; ++r) rows.push_back(to_q.row(r));
    for (std::size_t k = 0; k < reps.size(); ++k)
      if (mask >> k & 1) rows.push_back(roots[reps[k]]);
    auto V = nullspace(QMatrix::from_rows(rows, n));
    if (V.empty()) continue;
    std::vector<std::size_t> zero;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      bool all = true;
      for (const auto& v : V) all = all && sgn(dot(roots[i], v)) == 0;
      if (all) zero.push_back(i);
    }
    // closed under the pattern: a root outside the mask must not vanish on V
    bool closed = true;
    for (std::size_t k = 0; k < reps.size(); ++k)
      if (!(mask >> k & 1) && std::binary_search(zero.begin(), zero.end(), reps[k])) closed = false;
    if (!closed || zero.size() == roots.size()) continue;
    VanishingPattern p{zero, V, QVector(n)};
    for (long m = 2;; ++m) {
      QVector x(n);
      Rational c = 1;
      for (const auto& v : V) {
        x = x + c * v;
        c *= m;
      }
      if (has_pattern(roots, zero, x)) {
        p.representative = x;
        break;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

QVector sample_pattern(const SymmetricPairDatum& d, const VanishingPattern& p, std::mt19937_64& rng) {
  const auto roots = restricted_roots(d).all();
  std::uniform_int_distribution<long> U(-6, 6);
  for (int tries = 0; tries < 1000; ++tries) {
    QVector x(d.dim());
    for (const auto& v : p.subspace) x = x + Rational(U(rng)) * v;
    if (has_pattern(roots, p.vanishing, x)) return x;
  }
  return p.representative;
}

Mat sample_H_X(const CriticalInput& in, double scale, std::mt19937_64& rng) {
  const auto& R = *in.R;
  std::normal_distribution<double> N(0.0, scale);
  std::uniform_int_distribution<std::size_t> pick(0, R.z_reps.size() - 1);
  Mat Y = Mat::Zero(R.n, R.n);
  for (const auto& b : basis_h_X(in)) Y += N(rng) * b;
  return R.z_reps[pick(rng)] * expm(Y);
}

Mat sample_NP_H(const CriticalInput& in, double scale, std::mt19937_64& rng) {
  const auto& R = *in.R;
  std::normal_distribution<double> N(0.0, scale);
  Mat Y = Mat::Zero(R.n, R.n);
  for (const auto& b : R.basis_np_h(in.P)) Y += N(rng) * b;
  return exp_nilpotent(Y);
}

}  // namespace symconv

#include "symconv/rootsys.hpp"

#include "symconv/error.hpp"

#include <deque>

namespace symconv {

namespace {

bool positive_definite(const QMatrix& g) {
  // leading principal minors via exact elimination
  QMatrix m = g;
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(m(k, k)) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return true;
}

}  // namespace

Rational SymmetricPairDatum::inner(const QVector& x, const QVector& y) const { return dot(x, gram_ * y); }

Rational SymmetricPairDatum::inner_dual(const QVector& a, const QVector& b) const {
  return dot(a, gram_inv_ * b);
}

std::optional<std::size_t> SymmetricPairDatum::find(const RootVector& r) const {
  auto it = index_.find(r);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SymmetricPairDatum SymmetricPairDatum::build(std::vector<RootVector> roots, QMatrix gram, QMatrix sigma_on_a,
                                             std::vector<Multiplicity> mult_table) {
  SymmetricPairDatum d;
  const std::size_t n = gram.rows();
  if (!gram.is_square() || n == 0) throw Error(ErrorCode::InvalidArgument, "gram must be square and nonempty");
  if (!(gram == gram.transpose()) || !positive_definite(gram))
    throw Error(ErrorCode::InvalidArgument, "gram must be symmetric positive definite");
  if (sigma_on_a.rows() != n || sigma_on_a.cols() != n)
    throw Error(ErrorCode::InvalidArgument, "sigma_on_a has wrong shape");
  if (!(sigma_on_a * sigma_on_a == QMatrix::identity(n)))
    throw Error(ErrorCode::NotAnInvolution, "sigma_on_a squared is not the identity");
  if (!(sigma_on_a.transpose() * gram * sigma_on_a == gram))
    throw Error(ErrorCode::NotAnInvolution, "sigma_on_a is not an isometry of the gram matrix");
  if (mult_table.size() != roots.size())
    throw Error(ErrorCode::BadMultiplicity, "multiplicity table size differs from root count");

  d.gram_ = std::move(gram);
  d.gram_inv_ = inverse(d.gram_);
  d.sigma_ = std::move(sigma_on_a);
  d.pr_q_ = ratio(1, 2) * (QMatrix::identity(n) - d.sigma_);
  d.roots_ = std::move(roots);
  d.mult_ = std::move(mult_table);

  for (std::size_t i = 0; i < d.roots_.size(); ++i) {
    const auto& r = d.roots_[i];
    if (r.size() != n) throw Error(ErrorCode::InvalidArgument, "root has wrong dimension");
    if (r.is_zero()) throw Error(ErrorCode::ZeroRoot, "zero vector in root set");
    if (!d.index_.emplace(r, i).second) throw Error(ErrorCode::InvalidArgument, "duplicate root");
  }
  const QMatrix sT = d.sigma_.transpose();
  d.neg_.resize(d.roots_.size());
  d.sig_.resize(d.roots_.size());
  for (std::size_t i = 0; i < d.roots_.size(); ++i) {
    auto ni = d.find(-d.roots_[i]);
    if (!ni) throw Error(ErrorCode::InvalidArgument, "root set not closed under negation");
    d.neg_[i] = *ni;
    auto si = d.find(sT * d.roots_[i]);
    if (!si) throw Error(ErrorCode::RootSetNotSigmaStable, "sigma does not permute the roots");
    d.sig_[i] = *si;
  }
  // root system axioms: integrality and reflection stability
  for (std::size_t i = 0; i < d.roots_.size(); ++i) {
    const auto& a = d.roots_[i];
    Rational aa = d.inner_dual(a, a);
    for (std::size_t j = 0; j < d.roots_.size(); ++j) {
      const auto& b = d.roots_[j];
      Rational c = 2 * d.inner_dual(a, b) / aa;
      if (c.get_den() != 1) throw Error(ErrorCode::InvalidArgument, "Cartan integers not integral");
      if (!d.find(b - c * a)) throw Error(ErrorCode::InvalidArgument, "root set not reflection stable");
    }
  }
  for (std::size_t i = 0; i < d.roots_.size(); ++i) {
    const auto& m = d.mult_[i];
    bool fixed = d.sigmatheta_image(i) == i;
    if (m.dim <= 0) throw Error(ErrorCode::BadMultiplicity, "root space dimension must be positive");
    if (!fixed && (m.plus || m.minus))
      throw Error(ErrorCode::BadMultiplicity, "signed dims given for a root not fixed by sigma*theta");
    if (m.plus.has_value() != m.minus.has_value())
      throw Error(ErrorCode::BadMultiplicity, "signed dims must be given together");
    if (m.plus && (*m.plus < 0 || *m.minus < 0 || *m.plus + *m.minus != m.dim))
      throw Error(ErrorCode::BadMultiplicity, "signed dims must be nonnegative and sum to dim");
    if (d.mult_[d.neg_[i]].dim != m.dim || d.mult_[d.sig_[i]].dim != m.dim)
      throw Error(ErrorCode::BadMultiplicity, "dims must agree on -alpha and sigma alpha");
    if (fixed && m.plus) {
      // theta maps g_alpha to g_{-alpha} and commutes with sigma*theta
      const auto& mn = d.mult_[d.neg_[i]];
      if (mn.plus && (*mn.plus != *m.plus))
        throw Error(ErrorCode::BadMultiplicity, "signed dims must agree on alpha and -alpha");
    }
  }
  d.a_h_ = nullspace(d.sigma_ - QMatrix::identity(n));
  d.a_q_ = nullspace(d.sigma_ + QMatrix::identity(n));
  return d;
}

std::vector<QVector> RestrictedRootDatum::all() const {
  std::vector<QVector> r;
  for (const auto& x : roots_q) r.push_back(x.functional);
  return r;
}

std::vector<QVector> RestrictedRootDatum::plus_set() const {
  std::vector<QVector> r;
  for (const auto& x : roots_q)
    if (x.plus) r.push_back(x.functional);
  return r;
}

std::vector<QVector> RestrictedRootDatum::minus_set() const {
  std::vector<QVector> r;
  for (const auto& x : roots_q)
    if (x.minus) r.push_back(x.functional);
  return r;
}

std::optional<std::size_t> RestrictedRootDatum::find(const QVector& f) const {
  for (std::size_t i = 0; i < roots_q.size(); ++i)
    if (roots_q[i].functional == f) return i;
  return std::nullopt;
}

RestrictedRootDatum restricted_roots(const SymmetricPairDatum& d) {
  RestrictedRootDatum out;
  const QMatrix prT = d.q_projector().transpose();
  for (std::size_t i = 0; i < d.size(); ++i) {
    QVector f = prT * d.root(i);
    if (f.is_zero()) continue;
    auto k = out.find(f);
    if (!k) {
      out.roots_q.push_back(RestrictedRoot{f, 0, false, false, {}});
      k = out.roots_q.size() - 1;
    }
    auto& rr = out.roots_q[*k];
    rr.multiplicity += d.mult(i).dim;
    rr.sources.push_back(i);
    if (d.sigmatheta_image(i) != i) {
      // g_alpha + sigma*theta(g_alpha) is direct, so both eigenvalues occur
      rr.plus = rr.minus = true;
    } else {
      const auto& m = d.mult(i);
      if (!m.plus) throw Error(ErrorCode::MissingMultiplicity, "sigma*theta-fixed root without signed dims");
      if (*m.plus > 0) rr.plus = true;
      if (*m.minus > 0) rr.minus = true;
    }
  }
  return out;
}

std::optional<std::size_t> WeylGroup::index_of(const QMatrix& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void WeylGroup::build_index() {
  index_.clear();
  for (std::size_t i = 0; i < elements.size(); ++i) index_.emplace(elements[i], i);
}

std::size_t WeylGroup::inverse_index(std::size_t i) const {
  auto k = index_of(inverse(elements[i]));
  if (!k) throw Error(ErrorCode::InvalidArgument, "group not closed under inverse");
  return *k;
}

std::string WeylGroup::name(std::size_t i) const {
  if (words[i].empty()) return "1";
  std::string s;
  for (auto g : words[i]) s += "s" + std::to_string(g);
  return s;
}

QMatrix reflection(const QVector& lambda, const QMatrix& gram_inverse) {
  if (lambda.is_zero()) throw Error(ErrorCode::ZeroRoot, "reflection in a zero functional");
  QVector hv = gram_inverse * lambda;
  Rational nn = dot(lambda, hv);
  QVector h = (Rational(2) / nn) * hv;
  const std::size_t n = lambda.size();
  QMatrix s = QMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) -= h[i] * lambda[j];
  return s;
}

QVector act_on_functional(const QMatrix& w, const QVector& lambda) {
  return inverse(w).transpose() * lambda;
}

WeylGroup weyl_group(const std::vector<QVector>& root_set, const QMatrix& gram_inverse, std::size_t dim,
                     std::size_t cap) {
  WeylGroup W;
  for (const auto& r : root_set) {
    QMatrix s = reflection(r, gram_inverse);
    bool seen = false;
    for (const auto& g : W.generators) seen = seen || g == s;
    if (!seen) W.generators.push_back(s);
  }
  std::map<QMatrix, std::size_t> seen;
  W.elements.push_back(QMatrix::identity(dim));
  W.words.push_back({});
  seen.emplace(W.elements[0], 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < W.generators.size(); ++g) {
      QMatrix next = W.elements[cur] * W.generators[g];
      if (seen.count(next)) continue;
      if (W.elements.size() >= cap) throw Error(ErrorCode::ClosureTooLarge, "Weyl group closure exceeded cap");
      auto word = W.words[cur];
      word.push_back(g);
      seen.emplace(next, W.elements.size());
      W.elements.push_back(next);
      W.words.push_back(std::move(word));
      queue.push_back(W.elements.size() - 1);
    }
  }
  W.build_index();
  return W;
}

std::vector<QVector> weyl_orbit(const WeylGroup& W, const QVector& point) {
  std::vector<QVector> out;
  std::map<QVector, bool> seen;
  for (const auto& w : W.elements) {
    QVector p = w * point;
    if (seen.emplace(p, true).second) out.push_back(p);
  }
  return out;
}

namespace datums {

namespace {

Multiplicity signed_mult(int plus, int minus) { return Multiplicity{plus + minus, plus, minus}; }

SymmetricPairDatum sl2_with(Multiplicity m) {
  // a = R diag(1,-1); B(X,Y) = 4 tr(XY)
  return SymmetricPairDatum::build({QVector{2}, QVector{-2}}, QMatrix{{8}}, QMatrix{{-1}}, {m, m});
}

SymmetricPairDatum sl3_with(Multiplicity m12, Multiplicity m23, Multiplicity m13) {
  // basis diag(1,-1,0), diag(0,1,-1); B(X,Y) = 6 tr(XY)
  std::vector<QVector> roots{QVector{2, -1}, QVector{-2, 1}, QVector{-1, 2}, QVector{1, -2}, QVector{1, 1},
                             QVector{-1, -1}};
  return SymmetricPairDatum::build(std::move(roots), QMatrix{{12, -6}, {-6, 12}}, QMatrix{{-1, 0}, {0, -1}},
                                   {m12, m12, m23, m23, m13, m13});
}

}  // namespace

SymmetricPairDatum kostant_sl2() { return sl2_with(signed_mult(1, 0)); }
SymmetricPairDatum sl2_so11() { return sl2_with(signed_mult(0, 1)); }
SymmetricPairDatum sl3_so21() { return sl3_with(signed_mult(1, 0), signed_mult(0, 1), signed_mult(0, 1)); }
SymmetricPairDatum sl3_sigma_theta() {
  return sl3_with(signed_mult(1, 0), signed_mult(1, 0), signed_mult(1, 0));
}

SymmetricPairDatum group_sl2() {
  // a' = a x a with coordinates (u, v); sigma' swaps the factors
  std::vector<QVector> roots{QVector{2, 0}, QVector{-2, 0}, QVector{0, 2}, QVector{0, -2}};
  Multiplicity m{1, std::nullopt, std::nullopt};
  return SymmetricPairDatum::build(std::move(roots), QMatrix{{8, 0}, {0, 8}}, QMatrix{{0, 1}, {1, 0}},
                                   {m, m, m, m});
}

SymmetricPairDatum by_name(const std::string& name) {
  if (name == "kostant_sl2") return kostant_sl2();
  if (name == "sl2_so11") return sl2_so11();
  if (name == "sl3_so21") return sl3_so21();
  if (name == "sl3_sigma_theta") return sl3_sigma_theta();
  if (name == "group_sl2") return group_sl2();
  throw Error(ErrorCode::ConfigError, "unknown preset " + name);
}

}  // namespace datums

}  // namespace symconv

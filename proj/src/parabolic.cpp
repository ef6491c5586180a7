#include "symconv/parabolic.hpp"

#include "symconv/error.hpp"

#include <algorithm>

namespace symconv {

std::vector<std::size_t> set_minus(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

std::vector<std::size_t> set_intersection(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

bool is_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

PositiveSystem::PositiveSystem(DatumPtr datum, QVector chamber) : datum_(std::move(datum)), chamber_(std::move(chamber)) {
  const auto& d = *datum_;
  if (chamber_.size() != d.dim()) throw Error(ErrorCode::InvalidArgument, "chamber vector has wrong dimension");
  member_.assign(d.size(), false);
  for (std::size_t i = 0; i < d.size(); ++i) {
    int s = sgn(dot(d.root(i), chamber_));
    if (s == 0) throw Error(ErrorCode::NotRegular, "chamber vector lies on a root hyperplane");
    if (s > 0) {
      member_[i] = true;
      positive_.push_back(i);
    }
  }
  for (auto i : positive_) {
    if (member_[d.sigma_image(i)]) sigma_part_.push_back(i);
    if (member_[d.sigmatheta_image(i)]) sigmatheta_part_.push_back(i);
  }
}

PositiveSystem PositiveSystem::opposite() const { return PositiveSystem(datum_, -chamber_); }

PositiveSystem PositiveSystem::reflect(std::size_t root) const {
  return transform(reflection(datum_->root(root), datum_->gram_inverse()));
}

PositiveSystem PositiveSystem::transform(const QMatrix& w) const { return PositiveSystem(datum_, w * chamber_); }

std::vector<std::size_t> classify(const PositiveSystem& P, const QMatrix& tau) {
  const auto& d = P.datum();
  const QMatrix tT = tau.transpose();
  std::vector<std::size_t> out;
  for (auto i : P.positive()) {
    auto j = d.find(tT * d.root(i));
    if (j && P.contains(*j)) out.push_back(i);
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> plus_minus(const PositiveSystem& P) {
  const auto& d = P.datum();
  std::vector<std::size_t> plus, minus;
  for (auto i : P.positive()) {
    if (!d.in_aq_star(i)) {
      plus.push_back(i);
      continue;
    }
    const auto& m = d.mult(i);
    if (!m.plus) throw Error(ErrorCode::MissingMultiplicity, "root in a_q^* without signed dims");
    if (*m.plus > 0) plus.push_back(i);
  }
  for (auto i : P.sigmatheta_part()) {
    if (!d.in_aq_star(i)) {
      minus.push_back(i);
      continue;
    }
    const auto& m = d.mult(i);
    if (!m.minus) throw Error(ErrorCode::MissingMultiplicity, "root in a_q^* without signed dims");
    if (*m.minus > 0) minus.push_back(i);
  }
  return {plus, minus};
}

SigmaClassification classification(const PositiveSystem& P) {
  auto [plus, minus] = plus_minus(P);
  return SigmaClassification{P.sigma_part(), P.sigmatheta_part(), std::move(plus), std::move(minus)};
}

bool is_h_extreme(const PositiveSystem& P) {
  std::vector<std::size_t> rest;
  for (auto i : P.positive())
    if (!P.datum().in_aq_star(i)) rest.push_back(i);
  return P.sigma_part() == rest;
}

bool is_q_extreme(const PositiveSystem& P) {
  std::vector<std::size_t> rest;
  for (auto i : P.positive())
    if (!P.datum().in_ah_star(i)) rest.push_back(i);
  return P.sigmatheta_part() == rest;
}

std::vector<std::size_t> indivisible(const SymmetricPairDatum& d, const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> out;
  for (auto i : subset)
    if (!d.find(ratio(1, 2) * d.root(i))) out.push_back(i);
  return out;
}

std::vector<std::size_t> simple_roots(const PositiveSystem& P) {
  const auto& d = P.datum();
  std::vector<std::size_t> out;
  for (auto i : indivisible(d, P.positive())) {
    bool decomposable = false;
    for (auto j : P.positive()) {
      auto k = d.find(d.root(i) - d.root(j));
      if (k && P.contains(*k)) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) out.push_back(i);
  }
  return out;
}

ExtremizeResult h_extremize(const PositiveSystem& P) {
  ExtremizeResult res{P, {}, {P}};
  const auto& d = P.datum();
  const std::size_t cap = P.positive().size();
  while (!is_h_extreme(res.result)) {
    if (res.trace.size() >= cap) throw Error(ErrorCode::NoSimpleRootFound, "reflection walk exceeded |Sigma(P)| steps");
    const auto& cur = res.result;
    auto simple = simple_roots(cur);
    std::optional<std::size_t> pick;
    // first admissible root in stored order
    for (auto i : simple) {
      bool in_st = std::binary_search(cur.sigmatheta_part().begin(), cur.sigmatheta_part().end(), i);
      if (in_st && !d.in_aq_star(i)) {
        pick = i;
        break;
      }
    }
    if (!pick) throw Error(ErrorCode::NoSimpleRootFound, "no simple root in Sigma(P,sigma theta) outside a_q^*");
    PositiveSystem next = cur.reflect(*pick);
    if (!(is_subset(cur.sigma_part(), next.sigma_part()) && next.sigma_part().size() > cur.sigma_part().size()))
      throw Error(ErrorCode::NoSimpleRootFound, "reflection did not enlarge Sigma(P,sigma)");
    res.trace.push_back(*pick);
    res.chain.push_back(next);
    res.result = next;
  }
  return res;
}

bool extremize_postconditions_hold(const PositiveSystem& P, const PositiveSystem& Q) {
  const auto& d = P.datum();
  std::vector<std::size_t> pq, qq, ph, qh;
  for (auto i : P.positive()) {
    if (d.in_aq_star(i)) pq.push_back(i);
    if (d.in_ah_star(i)) ph.push_back(i);
  }
  for (auto i : Q.positive()) {
    if (d.in_aq_star(i)) qq.push_back(i);
    if (d.in_ah_star(i)) qh.push_back(i);
  }
  return pq == qq && ph == qh && is_subset(P.sigma_part(), Q.sigma_part()) && is_h_extreme(Q);
}

QVector default_chamber(const SymmetricPairDatum& d) {
  const std::size_t n = d.dim();
  // Z = (1, m, m^2, ...) is regular for m large enough
  for (long m = 2;; ++m) {
    QVector z(n);
    Rational p = 1;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = p;
      p *= m;
    }
    bool regular = true;
    for (const auto& r : d.roots()) regular = regular && sgn(dot(r, z)) != 0;
    if (regular) return z;
  }
}

WeylGroup full_weyl_group(const SymmetricPairDatum& d) {
  return weyl_group(d.roots(), d.gram_inverse(), d.dim());
}

std::vector<PositiveSystem> enumerate_positive_systems(const DatumPtr& d, const QVector& base_chamber) {
  std::vector<PositiveSystem> out;
  PositiveSystem base(d, base_chamber);
  for (const auto& w : full_weyl_group(*d).elements) {
    PositiveSystem p = base.transform(w);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

}  // namespace symconv

#include "symconv/polyhedra.hpp"

#include "symconv/error.hpp"
#include "symconv/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace symconv {

CorootVector coroot(const QVector& alpha, const QMatrix& gram) {
  if (alpha.is_zero()) throw Error(ErrorCode::ZeroRoot, "coroot of the zero functional");
  QVector check = inverse(gram) * alpha;
  Rational nn = dot(alpha, check);
  return CorootVector{(Rational(2) / nn) * check, check};
}

Rational c_alpha(const QVector& alpha, const SymmetricPairDatum& d) {
  QVector res = d.q_projector().transpose() * alpha;
  CorootVector full = coroot(alpha, d.gram());
  CorootVector restricted = coroot(res, d.gram());
  return d.inner(full.h_alpha, full.h_alpha) / d.inner(restricted.h_alpha, restricted.h_alpha);
}

namespace {

struct Row {
  std::vector<Rational> c;
  Rational rhs;
  bool eq = false;

  bool zero_coeffs() const {
    return std::all_of(c.begin(), c.end(), [](const Rational& x) { return sgn(x) == 0; });
  }
  bool operator<(const Row& o) const {
    if (eq != o.eq) return eq < o.eq;
    if (c != o.c) return c < o.c;
    return rhs < o.rhs;
  }
};

void normalize(Row& r) {
  mpz_class l = 1, g = 0;
  for (const auto& x : r.c) l = lcm(l, mpz_class(x.get_den()));
  l = lcm(l, mpz_class(r.rhs.get_den()));
  for (const auto& x : r.c) g = gcd(g, mpz_class(x.get_num()) * (l / mpz_class(x.get_den())));
  g = gcd(g, mpz_class(r.rhs.get_num()) * (l / mpz_class(r.rhs.get_den())));
  if (g == 0) return;
  Rational f = Rational(l) / Rational(g);
  if (r.eq) {
    // fix the sign of equalities: first nonzero coefficient positive
    for (const auto& x : r.c)
      if (sgn(x) != 0) {
        if (sgn(x) < 0) f = -f;
        break;
      }
  }
  for (auto& x : r.c) x *= f;
  r.rhs *= f;
}

QVector row_of(const Row& r, std::size_t n) {
  QVector a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = r.c[i];
  return a;
}

std::size_t family_rank(const std::vector<QVector>& vs, std::size_t n) {
  if (vs.empty()) return 0;
  return rank(QMatrix::from_rows(vs, n));
}

}  // namespace

HRep fourier_motzkin(const std::vector<QVector>& vertices, const std::vector<QVector>& generators, std::size_t n) {
  if (vertices.empty()) throw Error(ErrorCode::InvalidArgument, "polyhedral set needs at least one vertex");
  const std::size_t m = vertices.size(), k = generators.size(), N = n + m + k;
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    Row r{std::vector<Rational>(N, Rational(0)), 0, true};
    r.c[i] = 1;
    for (std::size_t j = 0; j < m; ++j) r.c[n + j] = -vertices[j][i];
    for (std::size_t l = 0; l < k; ++l) r.c[n + m + l] = -generators[l][i];
    rows.push_back(r);
  }
  {
    Row r{std::vector<Rational>(N, Rational(0)), 1, true};
    for (std::size_t j = 0; j < m; ++j) r.c[n + j] = 1;
    rows.push_back(r);
  }
  for (std::size_t j = 0; j < m + k; ++j) {
    Row r{std::vector<Rational>(N, Rational(0)), 0, false};
    r.c[n + j] = -1;
    rows.push_back(r);
  }

  std::vector<bool> alive(N, true);
  for (std::size_t step = 0; step < m + k; ++step) {
    // substitute through an equality when possible
    std::optional<std::pair<std::size_t, std::size_t>> sub;
    for (std::size_t ri = 0; ri < rows.size() && !sub; ++ri) {
      if (!rows[ri].eq) continue;
      for (std::size_t v = n; v < N; ++v)
        if (alive[v] && sgn(rows[ri].c[v]) != 0) {
          sub = std::make_pair(ri, v);
          break;
        }
    }
    std::vector<Row> next;
    std::size_t var;
    if (sub) {
      auto [ri, v] = *sub;
      var = v;
      const Row pivot = rows[ri];
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == ri) continue;
        Row r = rows[i];
        if (sgn(r.c[v]) != 0) {
          Rational f = r.c[v] / pivot.c[v];
          // for inequalities f may have any sign; subtracting a multiple of an equality is always valid
          for (std::size_t j = 0; j < N; ++j) r.c[j] -= f * pivot.c[j];
          r.rhs -= f * pivot.rhs;
        }
        next.push_back(std::move(r));
      }
    } else {
      // cheapest Fourier-Motzkin variable
      std::size_t best = N, best_cost = std::numeric_limits<std::size_t>::max();
      for (std::size_t v = n; v < N; ++v) {
        if (!alive[v]) continue;
        std::size_t p = 0, q = 0;
        for (const auto& r : rows) {
          if (sgn(r.c[v]) > 0) ++p;
          if (sgn(r.c[v]) < 0) ++q;
        }
        if (p * q < best_cost) {
          best_cost = p * q;
          best = v;
        }
      }
      var = best;
      std::vector<const Row*> pos, neg;
      for (const auto& r : rows) {
        int s = sgn(r.c[var]);
        if (s == 0) next.push_back(r);
        else if (s > 0) pos.push_back(&r);
        else neg.push_back(&r);
      }
      for (const Row* p : pos)
        for (const Row* q : neg) {
          Row r{std::vector<Rational>(N, Rational(0)), 0, false};
          Rational fp = -q->c[var], fq = p->c[var];
          for (std::size_t j = 0; j < N; ++j) r.c[j] = fp * p->c[j] + fq * q->c[j];
          r.rhs = fp * p->rhs + fq * q->rhs;
          next.push_back(std::move(r));
        }
    }
    alive[var] = false;
    std::set<Row> uniq;
    rows.clear();
    for (auto& r : next) {
      r.c[var] = 0;
      if (r.zero_coeffs()) {
        if (r.eq ? sgn(r.rhs) != 0 : sgn(r.rhs) < 0)
          throw Error(ErrorCode::InvalidArgument, "elimination produced an infeasible system");
        continue;
      }
      normalize(r);
      if (uniq.insert(r).second) rows.push_back(r);
    }
  }

  // classify final rows against the V-representation
  std::vector<QVector> span;
  for (std::size_t j = 1; j < m; ++j) span.push_back(vertices[j] - vertices[0]);
  for (const auto& g : generators) span.push_back(g);
  HRep h;
  h.affine_dim = family_rank(span, n);

  std::vector<QVector> eq_aug;
  std::vector<Row> ineqs;
  for (const auto& r : rows) {
    QVector a = row_of(r, n);
    bool all_tight = true;
    for (const auto& v : vertices) all_tight = all_tight && dot(a, v) == r.rhs;
    for (const auto& g : generators) all_tight = all_tight && sgn(dot(a, g)) == 0;
    if (r.eq || all_tight) {
      QVector aug(n + 1);
      for (std::size_t i = 0; i < n; ++i) aug[i] = a[i];
      aug[n] = r.rhs;
      eq_aug.push_back(aug);
    } else {
      ineqs.push_back(r);
    }
  }
  std::vector<std::size_t> eq_pivots;
  if (!eq_aug.empty()) {
    QMatrix E = QMatrix::from_rows(eq_aug, n + 1);
    eq_pivots = rref(E);
    for (std::size_t i = 0; i < eq_pivots.size(); ++i) {
      QVector a(n);
      for (std::size_t j = 0; j < n; ++j) a[j] = E(i, j);
      h.equalities.push_back(Inequality{a, E(i, n)});
    }
  }

  std::set<std::pair<QVector, Rational>> seen;
  for (const auto& r : ineqs) {
    QVector a = row_of(r, n);
    Rational b = r.rhs;
    std::vector<QVector> tight_v, tight_dirs;
    for (const auto& v : vertices)
      if (dot(a, v) == b) tight_v.push_back(v);
    if (tight_v.empty()) continue;
    for (std::size_t j = 1; j < tight_v.size(); ++j) tight_dirs.push_back(tight_v[j] - tight_v[0]);
    for (const auto& g : generators)
      if (sgn(dot(a, g)) == 0) tight_dirs.push_back(g);
    if (family_rank(tight_dirs, n) + 1 != h.affine_dim) continue;
    // reduce modulo the equalities for a canonical form
    for (std::size_t i = 0; i < eq_pivots.size(); ++i) {
      Rational f = a[eq_pivots[i]];
      if (sgn(f) == 0) continue;
      a = a - f * h.equalities[i].a;
      b -= f * h.equalities[i].b;
    }
    Row rr{a.v, b, false};
    normalize(rr);
    auto key = std::make_pair(QVector(rr.c), rr.rhs);
    if (seen.insert(key).second) h.inequalities.push_back(Inequality{key.first, key.second});
  }
  std::sort(h.inequalities.begin(), h.inequalities.end(), [](const Inequality& x, const Inequality& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  return h;
}

PolyhedralSet::PolyhedralSet(std::vector<QVector> vertices, Cone cone)
    : vertices_(std::move(vertices)), cone_(std::move(cone)) {
  for (const auto& v : vertices_)
    if (v.size() != cone_.dim) throw Error(ErrorCode::InvalidArgument, "vertex dimension differs from cone");
  for (const auto& g : cone_.generators)
    if (g.size() != cone_.dim) throw Error(ErrorCode::InvalidArgument, "generator dimension differs from cone");
  hrep_ = fourier_motzkin(vertices_, cone_.generators, cone_.dim);
}

namespace {

// Columns: lambda (m), mu (k), then extra.
QMatrix vg_matrix(const PolyhedralSet& s, std::size_t extra_cols, std::size_t extra_rows) {
  const std::size_t n = s.dim(), m = s.vertices().size(), k = s.cone().generators.size();
  QMatrix A(n + 1 + extra_rows, m + k + extra_cols);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) A(i, j) = s.vertices()[j][i];
    for (std::size_t l = 0; l < k; ++l) A(i, m + l) = s.cone().generators[l][i];
  }
  for (std::size_t j = 0; j < m; ++j) A(n, j) = 1;
  return A;
}

}  // namespace

bool contains(const PolyhedralSet& set, const QVector& x) {
  const std::size_t n = set.dim();
  QMatrix A = vg_matrix(set, 0, 0);
  QVector b(n + 1);
  for (std::size_t i = 0; i < n; ++i) b[i] = x[i];
  b[n] = 1;
  return lp_feasible(A, b);
}

Rational distance_inf(const PolyhedralSet& set, const QVector& x) {
  const std::size_t n = set.dim(), m = set.vertices().size(), k = set.cone().generators.size();
  // rows 0..n-1: V l + G mu + s - u = x ; rows n+1..2n: V l + G mu - s + w = x
  const std::size_t s_col = m + k, u0 = s_col + 1, w0 = u0 + n;
  QMatrix A(2 * n + 1, w0 + n);
  QVector b(2 * n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) A(i, j) = A(n + 1 + i, j) = set.vertices()[j][i];
    for (std::size_t l = 0; l < k; ++l) A(i, m + l) = A(n + 1 + i, m + l) = set.cone().generators[l][i];
    A(i, s_col) = 1;
    A(i, u0 + i) = -1;
    A(n + 1 + i, s_col) = -1;
    A(n + 1 + i, w0 + i) = 1;
    b[i] = b[n + 1 + i] = x[i];
  }
  for (std::size_t j = 0; j < m; ++j) A(n, j) = 1;
  b[n] = 1;
  QVector c(w0 + n);
  c[s_col] = 1;
  LpResult r = solve_lp(A, b, c);
  if (r.status != LpStatus::Optimal) throw Error(ErrorCode::InvalidArgument, "distance LP did not solve");
  return r.value;
}

bool contains(const PolyhedralSet& set, const Eigen::VectorXd& x, double tol) {
  if (tol < 0) throw Error(ErrorCode::InvalidArgument, "negative tolerance");
  QVector q = from_eigen(x);
  if (tol == 0) return contains(set, q);
  return distance_inf(set, q) <= from_double(tol);
}

bool hrep_contains(const HRep& h, const QVector& x) {
  for (const auto& e : h.equalities)
    if (dot(e.a, x) != e.b) return false;
  for (const auto& e : h.inequalities)
    if (dot(e.a, x) > e.b) return false;
  return true;
}

double hrep_slack(const HRep& h, const Eigen::VectorXd& x) {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& e : h.equalities) {
    Eigen::VectorXd a = to_eigen(e.a);
    s = std::min(s, -std::abs(a.dot(x) - e.b.get_d()) / a.norm());
  }
  for (const auto& e : h.inequalities) {
    Eigen::VectorXd a = to_eigen(e.a);
    s = std::min(s, (e.b.get_d() - a.dot(x)) / a.norm());
  }
  return s;
}

bool cone_contains(const Cone& c, const QVector& x) {
  const std::size_t n = c.dim;
  if (c.generators.empty()) return x.is_zero();
  return lp_feasible(QMatrix::from_cols(c.generators, n), x);
}

bool cones_equal(const Cone& a, const Cone& b) {
  for (const auto& g : a.generators)
    if (!cone_contains(b, g)) return false;
  for (const auto& g : b.generators)
    if (!cone_contains(a, g)) return false;
  return true;
}

namespace {

std::vector<QVector> nonzero(const std::vector<QVector>& gs) {
  std::vector<QVector> out;
  for (const auto& g : gs)
    if (!g.is_zero()) out.push_back(g);
  return out;
}

}  // namespace

bool is_pointed(const Cone& c) {
  auto gs = nonzero(c.generators);
  if (gs.empty()) return true;
  // a line exists iff G mu = 0 for some mu >= 0 with sum mu = 1
  const std::size_t n = c.dim, k = gs.size();
  QMatrix A(n + 1, k);
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t i = 0; i < n; ++i) A(i, l) = gs[l][i];
    A(n, l) = 1;
  }
  QVector b(n + 1);
  b[n] = 1;
  return !lp_feasible(A, b);
}

std::optional<QVector> pointedness_certificate(const Cone& c) {
  auto gs = nonzero(c.generators);
  const std::size_t n = c.dim, k = gs.size();
  if (k == 0) return QVector(n);
  // xi = xp - xm, xi.g_l - t_l = 1
  QMatrix A(k, 2 * n + k);
  QVector b(k);
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      A(l, i) = gs[l][i];
      A(l, n + i) = -gs[l][i];
    }
    A(l, 2 * n + l) = -1;
    b[l] = 1;
  }
  LpResult r = solve_lp(A, b, QVector(2 * n + k));
  if (r.status != LpStatus::Optimal) return std::nullopt;
  QVector xi(n);
  for (std::size_t i = 0; i < n; ++i) xi[i] = r.y[i] - r.y[n + i];
  return xi;
}

bool proper_on_cone(const QMatrix& p, const Cone& c) {
  auto gs = nonzero(c.generators);
  if (gs.empty()) return true;
  const std::size_t n = c.dim, k = gs.size(), pr = p.rows();
  if (p.cols() != n) throw Error(ErrorCode::InvalidArgument, "linear map has wrong domain dimension");
  QMatrix pg = p * QMatrix::from_cols(gs, n);
  // search x = G mu with p x = 0 and s x_i >= 1
  for (std::size_t i = 0; i < n; ++i)
    for (int s : {1, -1}) {
      QMatrix A(pr + 1, k + 1);
      QVector b(pr + 1);
      for (std::size_t r = 0; r < pr; ++r)
        for (std::size_t l = 0; l < k; ++l) A(r, l) = pg(r, l);
      for (std::size_t l = 0; l < k; ++l) A(pr, l) = s * gs[l][i];
      A(pr, k) = -1;
      b[pr] = 1;
      if (lp_feasible(A, b)) return false;
    }
  return true;
}

bool contains_line(const PolyhedralSet& s) { return !is_pointed(s.cone()); }

Cone gamma_a(const SymmetricPairDatum& d, const std::vector<std::size_t>& S) {
  Cone c{d.dim(), {}};
  for (auto i : S) c.generators.push_back(coroot(d.root(i), d.gram()).h_alpha);
  return c;
}

Cone gamma_aq(const SymmetricPairDatum& d, const std::vector<std::size_t>& S) {
  Cone c{d.dim(), {}};
  for (auto i : S) c.generators.push_back(d.q_projector() * coroot(d.root(i), d.gram()).h_alpha);
  return c;
}

Cone gamma_cone(const PositiveSystem& P) { return gamma_aq(P.datum(), plus_minus(P).second); }

Cone upsilon_cone(const PositiveSystem& P) {
  if (!is_q_extreme(P)) throw Error(ErrorCode::NotQExtreme, "Upsilon(P) needs a q-extreme P");
  const auto& d = P.datum();
  RestrictedRootDatum rr = restricted_roots(d);
  const QMatrix prT = d.q_projector().transpose();
  Cone c{d.dim(), {}};
  std::set<QVector> seen;
  for (auto i : P.sigmatheta_part()) {
    QVector f = prT * d.root(i);
    if (f.is_zero()) continue;
    auto k = rr.find(f);
    if (!k || !rr.roots_q[*k].minus) continue;
    if (seen.insert(f).second) c.generators.push_back(coroot(f, d.gram()).h_alpha);
  }
  return c;
}

std::vector<std::size_t> gk_roots(const PositiveSystem& P, const PositiveSystem& Q) {
  std::vector<std::size_t> out;
  for (auto i : P.positive())
    if (!Q.contains(i)) out.push_back(i);
  return out;
}

Cone gk_cone(const PositiveSystem& P, const PositiveSystem& Q) { return gamma_a(P.datum(), gk_roots(P, Q)); }

PolyhedralSet omega(const QVector& a_log, const WeylGroup& W_KH, const Cone& gamma) {
  return PolyhedralSet(weyl_orbit(W_KH, a_log), gamma);
}

HullProjector::HullProjector(const std::vector<QVector>& points, const QMatrix& gram) : gram_(to_eigen(gram)) {
  std::vector<QVector> pts;
  for (const auto& p : points)
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  if (pts.empty() || pts.size() > 16) throw Error(ErrorCode::InvalidArgument, "hull projector needs 1..16 points");
  const std::size_t n = pts[0].size();
  for (unsigned mask = 1; mask < (1u << pts.size()); ++mask) {
    std::vector<QVector> sub;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (mask & (1u << i)) sub.push_back(pts[i]);
    if (sub.size() > n + 1) continue;
    std::vector<QVector> dirs;
    for (std::size_t i = 1; i < sub.size(); ++i) dirs.push_back(sub[i] - sub[0]);
    if (family_rank(dirs, n) != dirs.size()) continue;
    Piece pc;
    pc.base = to_eigen(sub[0]);
    pc.dirs = Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t j = 0; j < dirs.size(); ++j) pc.dirs.col(static_cast<Eigen::Index>(j)) = to_eigen(dirs[j]);
    if (!dirs.empty()) {
      Eigen::MatrixXd DtG = pc.dirs.transpose() * gram_;
      pc.solve = (DtG * pc.dirs).inverse() * DtG;
    }
    pieces_.push_back(std::move(pc));
  }
}

Eigen::VectorXd HullProjector::project(const Eigen::VectorXd& x) const {
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd out = pieces_.front().base;
  for (const auto& pc : pieces_) {
    Eigen::VectorXd y = pc.base;
    if (pc.dirs.cols() > 0) {
      Eigen::VectorXd c = pc.solve * (x - pc.base);
      if (c.minCoeff() < -1e-12 || c.sum() > 1 + 1e-12) continue;
      y += pc.dirs * c;
    }
    Eigen::VectorXd r = x - y;
    double dist = r.dot(gram_ * r);
    if (dist < best) {
      best = dist;
      out = y;
    }
  }
  return out;
}

}  // namespace symconv

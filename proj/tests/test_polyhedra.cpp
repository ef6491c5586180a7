#include "oracles.hpp"

#include "symconv/error.hpp"
#include "symconv/io.hpp"
#include "symconv/lp.hpp"
#include "symconv/matrixgrp.hpp"
#include "symconv/polyhedra.hpp"

#include <doctest.h>

#include <random>

using namespace symconv;

namespace {

DatumPtr datum(const std::string& name) { return std::make_shared<const SymmetricPairDatum>(datums::by_name(name)); }

const std::vector<std::string> kDatums{"kostant_sl2", "sl2_so11", "sl3_so21", "sl3_sigma_theta", "group_sl2"};

QVector random_point(std::mt19937_64& rng, std::size_t dim, int range, int den) {
  std::uniform_int_distribution<int> u(-range * den, range * den);
  QVector p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = ratio(u(rng), den);
  return p;
}

}  // namespace

TEST_CASE("exact simplex") {
  // minimize -y0 - y1 with y0 + y1 + s = 4, y0 + 3 y1 + t = 6
  QMatrix A{{1, 1, 1, 0}, {1, 3, 0, 1}};
  auto r = solve_lp(A, QVector{4, 6}, QVector{-1, -1, 0, 0});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == -4);
  CHECK(!lp_feasible(QMatrix{{1, 1}}, QVector{-1}));
  CHECK(solve_lp(QMatrix{{1, -1}}, QVector{0}, QVector{-1, 0}).status == LpStatus::Unbounded);
}

TEST_CASE("coroots") {
  SUBCASE("sl(2): H_alpha = diag(1,-1)") {
    auto c = coroot(QVector{2}, QMatrix{{8}});
    CHECK(c.h_alpha == QVector{1});
    CHECK(c.h_alpha_check == QVector{ratio(1, 4)});
  }
  SUBCASE("sl(3), alpha_12: H = diag(1,-1,0), orthogonal to ker alpha_12") {
    auto d = datums::by_name("sl3_so21");
    auto c = coroot(d.root(0), d.gram());
    CHECK(c.h_alpha == QVector{1, 0});
    // ker alpha_12 in a is spanned by diag(1,1,-2) = diag(1,-1,0) + 2 diag(0,1,-1)
    CHECK(d.inner(c.h_alpha, QVector{1, 2}) == 0);
    CHECK(dot(d.root(0), c.h_alpha) == 2);
  }
  SUBCASE("scaling and relations") {
    auto d = datums::by_name("sl3_so21");
    for (const auto& a : d.roots()) {
      auto c = coroot(a, d.gram());
      CHECK(coroot(Rational(2) * a, d.gram()).h_alpha == ratio(1, 2) * c.h_alpha);
      CHECK(c.h_alpha_check == (Rational(2) / d.inner(c.h_alpha, c.h_alpha)) * c.h_alpha);
      QVector x{3, -7};
      CHECK(d.inner(c.h_alpha_check, x) == dot(a, x));
    }
  }
  CHECK_THROWS_WITH_AS(coroot(QVector{0, 0}, QMatrix{{1, 0}, {0, 1}}), doctest::Contains("ZeroRoot"), Error);
}

TEST_CASE("c_alpha is positive and pr_q H_alpha is proportional to the restricted coroot") {
  for (const auto& name : kDatums) {
    auto d = datums::by_name(name);
    for (std::size_t i = 0; i < d.size(); ++i) {
      QVector r = d.q_projector().transpose() * d.root(i);
      if (r.is_zero()) continue;
      Rational c = c_alpha(d.root(i), d);
      CHECK(c > 0);
      QVector lhs = d.q_projector() * coroot(d.root(i), d.gram()).h_alpha;
      CHECK(lhs == c * coroot(r, d.gram()).h_alpha);
    }
  }
}

TEST_CASE("gamma cone examples") {
  auto R3 = Realization::preset("sl3_so21");
  SUBCASE("sigma = theta: Gamma(P) = 0") {
    auto d = datum("kostant_sl2");
    Cone g = gamma_cone(PositiveSystem(d, QVector{1}));
    for (const auto& v : g.generators) CHECK(v.is_zero());
  }
  SUBCASE("SL(3)/SO(2,1): cone(diag(1,0,-1), diag(0,1,-1))") {
    // diag(1,0,-1) = (1,1) and diag(0,1,-1) = (0,1) in the basis diag(1,-1,0), diag(0,1,-1)
    Cone g = gamma_cone(R3.base_parabolic());
    CHECK(cones_equal(g, Cone{2, {QVector{1, 1}, QVector{0, 1}}}));
  }
  SUBCASE("SL(2)/SO(1,1): the ray through diag(1,-1)") {
    Cone g = gamma_cone(PositiveSystem(datum("sl2_so11"), QVector{1}));
    CHECK(cones_equal(g, Cone{1, {QVector{1}}}));
  }
}

TEST_CASE("Gamma(P) = Upsilon(P) for every q-extreme P, exactly") {
  for (const auto& name : kDatums) {
    CAPTURE(name);
    auto d = datum(name);
    for (const auto& P : enumerate_positive_systems(d, default_chamber(*d))) {
      if (!is_q_extreme(P)) {
        CHECK_THROWS_WITH_AS(upsilon_cone(P), doctest::Contains("NotQExtreme"), Error);
        continue;
      }
      Cone g = gamma_cone(P), u = upsilon_cone(P);
      for (const auto& x : g.generators) CHECK(cone_contains(u, x));
      for (const auto& x : u.generators) CHECK(cone_contains(g, x));
    }
  }
}

TEST_CASE("omega examples") {
  SUBCASE("Kostant, t = 1: segment between -diag(1,-1) and diag(1,-1)") {
    auto R = Realization::preset("kostant_sl2");
    PolyhedralSet om = omega(QVector{1}, R.w_kh(), gamma_cone(R.base_parabolic()));
    CHECK(hrep_contains(om.hrep(), QVector{1}));
    CHECK(hrep_contains(om.hrep(), QVector{-1}));
    CHECK(!contains(om, QVector{ratio(3, 2)}));
    CHECK(!hrep_contains(om.hrep(), QVector{ratio(3, 2)}));
    CHECK(distance_inf(om, QVector{ratio(3, 2)}) == ratio(1, 2));
  }
  SUBCASE("SL(2)/SO(1,1), t = -1: 0 lies on the ray") {
    auto R = Realization::preset("sl2_so11");
    PolyhedralSet om = omega(QVector{-1}, R.w_kh(), gamma_cone(R.base_parabolic()));
    CHECK(contains(om, QVector{0}));
    CHECK(!contains(om, QVector{-2}));
    CHECK(contains(om, QVector{100}));
  }
  SUBCASE("log a = 0, sigma = theta: the origin only") {
    auto R = Realization::preset("kostant_sl2");
    PolyhedralSet om = omega(QVector{0}, R.w_kh(), gamma_cone(R.base_parabolic()));
    CHECK(om.hrep().affine_dim == 0);
    CHECK(contains(om, QVector{0}));
    CHECK(!contains(om, QVector{ratio(1, 1000)}));
  }
}

TEST_CASE("property: LP membership, H-representation and the Caratheodory oracle agree") {
  std::mt19937_64 rng(11);
  for (const auto& name : Realization::preset_names()) {
    CAPTURE(name);
    auto R = Realization::preset(name);
    const auto& d = *R.datum;
    for (const auto& P : enumerate_positive_systems(R.datum, R.base_chamber)) {
      QVector a_log = random_point(rng, d.dim(), 2, 3);
      a_log = d.q_projector() * a_log;
      PolyhedralSet om = omega(a_log, R.w_kh(), gamma_cone(P));
      for (int t = 0; t < 300; ++t) {
        QVector x = d.q_projector() * random_point(rng, d.dim(), 4, 4);
        if (t % 3 == 0) x = random_point(rng, d.dim(), 4, 4);
        bool lp = contains(om, x);
        CHECK(lp == hrep_contains(om.hrep(), x));
        CHECK(lp == oracle::in_set(om.vertices(), om.cone().generators, x));
        if (lp)
          for (const auto& g : om.cone().generators) CHECK(contains(om, x + g));
      }
      for (const auto& v : om.vertices()) CHECK(contains(om, v));
    }
  }
}

TEST_CASE("Fourier-Motzkin on a square plus a ray") {
  std::vector<QVector> V{QVector{0, 0}, QVector{1, 0}, QVector{0, 1}, QVector{1, 1}, QVector{ratio(1, 2), ratio(1, 2)}};
  PolyhedralSet s(V, Cone{2, {QVector{1, 1}}});
  CHECK(s.hrep().affine_dim == 2);
  CHECK(s.hrep().inequalities.size() == 4);
  CHECK(hrep_contains(s.hrep(), QVector{5, 5}));
  CHECK(!hrep_contains(s.hrep(), QVector{5, 3}));
  CHECK(hrep_slack(s.hrep(), Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(0.5));
}

TEST_CASE("cone predicate examples") {
  Cone zero{2, {}};
  CHECK(is_pointed(zero));
  CHECK(proper_on_cone(QMatrix{{0, 0}}, zero));
  Cone line{2, {QVector{1, 2}, QVector{-1, -2}}};
  CHECK(!is_pointed(line));
  CHECK(contains_line(PolyhedralSet({QVector{0, 0}}, line)));
  auto cert = pointedness_certificate(Cone{2, {QVector{1, 0}, QVector{1, 1}}});
  REQUIRE(cert);
  CHECK(dot(*cert, QVector{1, 0}) > 0);
  CHECK(dot(*cert, QVector{1, 1}) > 0);
  CHECK(!pointedness_certificate(line));
}

TEST_CASE("group case: pr_q is proper on Gamma_a(Sigma(P, sigma theta))") {
  auto d = datum("group_sl2");
  for (const auto& P : enumerate_positive_systems(d, QVector{2, 1})) {
    Cone c = gamma_a(*d, P.sigmatheta_part());
    CHECK(proper_on_cone(d->q_projector(), c));
  }
}

TEST_CASE("property: cone predicates agree with the brute-force oracle") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    Cone c = oracle::random_cone(rng);
    QMatrix p = oracle::random_map(rng, c.dim);
    CAPTURE(t);
    CHECK(is_pointed(c) == oracle::pointed(c.generators, c.dim));
    CHECK(proper_on_cone(p, c) == oracle::proper(p, c.generators, c.dim));
    PolyhedralSet s({oracle::random_int_vector(rng, c.dim, -2, 2)}, c);
    CHECK(contains_line(s) == !oracle::pointed(c.generators, c.dim));
    if (auto cert = pointedness_certificate(c))
      for (const auto& g : c.generators)
        if (!g.is_zero()) CHECK(dot(*cert, g) > 0);
  }
}

TEST_CASE("property: Gamma(P) is pointed and Omega contains no line, for every P") {
  for (const auto& name : Realization::preset_names()) {
    auto R = Realization::preset(name);
    for (const auto& P : enumerate_positive_systems(R.datum, R.base_chamber)) {
      Cone g = gamma_cone(P);
      CHECK(is_pointed(g));
      auto cert = pointedness_certificate(g);
      REQUIRE(cert);
      CHECK(!contains_line(omega(R.datum->a_q_basis()[0], R.w_kh(), g)));
    }
  }
}

TEST_CASE("gk cone examples") {
  SUBCASE("Q = P gives 0") {
    auto d = datum("sl3_so21");
    PositiveSystem P(d, QVector{1, 1});
    for (const auto& g : gk_cone(P, P).generators) CHECK(g.is_zero());
  }
  SUBCASE("A1, Q = P-bar gives the ray of H_alpha") {
    auto d = datum("kostant_sl2");
    PositiveSystem P(d, QVector{1});
    CHECK(cones_equal(gk_cone(P, P.opposite()), Cone{1, {QVector{1}}}));
  }
  SUBCASE("A2, Q = s12 P gives the ray of H_alpha_12") {
    auto d = datum("sl3_so21");
    PositiveSystem P(d, QVector{1, 1});
    PositiveSystem Q = P.reflect(0);
    CHECK(gk_roots(P, Q) == std::vector<std::size_t>{0});
    CHECK(cones_equal(gk_cone(P, Q), Cone{2, {QVector{1, 0}}}));
  }
}

TEST_CASE("PolyhedralSet JSON carries exact rationals") {
  PolyhedralSet s({QVector{ratio(1, 3), 0}}, Cone{2, {QVector{1, 1}}});
  Json j = to_json(s);
  CHECK(j["vertices"][0][0] == "1/3");
  CHECK(j["generators"].size() == 1);
  CHECK(j["equalities"].size() + j["inequalities"].size() >= 2);
}

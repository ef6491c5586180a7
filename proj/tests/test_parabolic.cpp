#include "symconv/error.hpp"
#include "symconv/matrixgrp.hpp"
#include "symconv/parabolic.hpp"

#include <doctest.h>

#include <algorithm>

using namespace symconv;

namespace {

DatumPtr datum(const std::string& name) { return std::make_shared<const SymmetricPairDatum>(datums::by_name(name)); }

const std::vector<std::string> kDatums{"kostant_sl2", "sl2_so11", "sl3_so21", "sl3_sigma_theta", "group_sl2"};

std::vector<std::size_t> sorted_union(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

TEST_CASE("positive systems are enumerated completely") {
  auto count = [](const std::string& n) {
    auto d = datum(n);
    return enumerate_positive_systems(d, default_chamber(*d)).size();
  };
  CHECK(count("kostant_sl2") == 2);
  CHECK(count("sl3_so21") == 6);
  CHECK(count("group_sl2") == 4);
}

TEST_CASE("property: positive systems and the disjoint union law") {
  for (const auto& name : kDatums) {
    CAPTURE(name);
    auto d = datum(name);
    for (const auto& P : enumerate_positive_systems(d, default_chamber(*d))) {
      std::vector<std::size_t> all = sorted_union(P.positive(), P.opposite().positive());
      std::vector<std::size_t> expect(d->size());
      for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = i;
      CHECK(all == expect);
      CHECK(set_intersection(P.positive(), P.opposite().positive()).empty());
      // closed under addition
      for (auto i : P.positive())
        for (auto j : P.positive())
          if (auto k = d->find(d->root(i) + d->root(j))) CHECK(P.contains(*k));
      CHECK(set_intersection(P.sigma_part(), P.sigmatheta_part()).empty());
      CHECK(sorted_union(P.sigma_part(), P.sigmatheta_part()) == P.positive());
      CHECK(classify(P, d->sigma_on_a()) == P.sigma_part());
      CHECK(classify(P, d->sigmatheta_on_a()) == P.sigmatheta_part());
      auto c = classification(P);
      CHECK(is_subset(c.minus_part, c.sigmatheta_part));
    }
  }
}

TEST_CASE("classification examples") {
  SUBCASE("sigma = theta: Sigma(P, sigma) empty, Sigma(P)_- empty, h- and q-extreme") {
    for (const auto* n : {"kostant_sl2", "sl3_sigma_theta"}) {
      auto d = datum(n);
      for (const auto& P : enumerate_positive_systems(d, default_chamber(*d))) {
        CHECK(P.sigma_part().empty());
        CHECK(plus_minus(P).second.empty());
        CHECK(is_h_extreme(P));
        CHECK(is_q_extreme(P));
      }
    }
  }
  SUBCASE("SL(3)/SO(2,1) standard P") {
    auto d = datum("sl3_so21");
    PositiveSystem P(d, QVector{1, 1});
    CHECK(P.sigma_part().empty());
    CHECK(P.sigmatheta_part() == P.positive());
    auto [plus, minus] = plus_minus(P);
    CHECK(plus == std::vector<std::size_t>{0});     // alpha_12
    CHECK(minus == std::vector<std::size_t>{2, 4});  // alpha_23, alpha_13
    for (const auto& Q : enumerate_positive_systems(d, QVector{1, 1})) CHECK(is_h_extreme(Q));
  }
  SUBCASE("SL(2)/SO(1,1)") {
    auto d = datum("sl2_so11");
    auto [plus, minus] = plus_minus(PositiveSystem(d, QVector{1}));
    CHECK(plus.empty());
    CHECK(minus == std::vector<std::size_t>{0});
  }
  SUBCASE("group case: P x P-bar has Sigma(., sigma') empty; h-extreme iff both factors agree") {
    auto d = datum("group_sl2");
    CHECK(PositiveSystem(d, QVector{1, -1}).sigma_part().empty());
    for (const auto& P : enumerate_positive_systems(d, QVector{2, 1})) {
      bool same = sgn(P.chamber_vector()[0]) == sgn(P.chamber_vector()[1]);
      CHECK(is_h_extreme(P) == same);
    }
  }
}

TEST_CASE("plus_minus needs signed dimensions on roots in a_q^*") {
  Multiplicity bare{1, std::nullopt, std::nullopt};
  auto d = std::make_shared<const SymmetricPairDatum>(
      SymmetricPairDatum::build({QVector{2}, QVector{-2}}, QMatrix{{8}}, QMatrix{{-1}}, {bare, bare}));
  CHECK_THROWS_WITH_AS(plus_minus(PositiveSystem(d, QVector{1})), doctest::Contains("MissingMultiplicity"), Error);
}

TEST_CASE("h_extremize examples") {
  SUBCASE("already h-extreme: empty trace") {
    auto d = datum("sl3_so21");
    PositiveSystem P(d, QVector{1, 1});
    auto r = h_extremize(P);
    CHECK(r.trace.empty());
    CHECK(r.result == P);
  }
  SUBCASE("group case from P x P-bar: one reflection in (alpha, 0), ends at P-bar x P-bar") {
    auto d = datum("group_sl2");
    auto r = h_extremize(PositiveSystem(d, QVector{1, -1}));
    REQUIRE(r.trace.size() == 1);
    CHECK(d->root(r.trace[0]) == QVector{2, 0});
    CHECK(r.result == PositiveSystem(d, QVector{-1, -1}));
    CHECK(is_h_extreme(r.result));
  }
}

TEST_CASE("property: h_extremize on every positive system of every preset") {
  for (const auto& name : kDatums) {
    CAPTURE(name);
    auto d = datum(name);
    for (const auto& P : enumerate_positive_systems(d, default_chamber(*d))) {
      auto r = h_extremize(P);
      CHECK(r.trace.size() <= P.positive().size());
      CHECK(extremize_postconditions_hold(P, r.result));
      REQUIRE(r.chain.size() == r.trace.size() + 1);
      for (std::size_t s = 0; s < r.trace.size(); ++s) {
        const auto& cur = r.chain[s];
        auto simple = simple_roots(cur);
        auto a = r.trace[s];
        CHECK(std::find(simple.begin(), simple.end(), a) != simple.end());
        CHECK(std::binary_search(cur.sigmatheta_part().begin(), cur.sigmatheta_part().end(), a));
        CHECK(!d->in_aq_star(a));
        CHECK(is_subset(cur.sigma_part(), r.chain[s + 1].sigma_part()));
        CHECK(r.chain[s + 1].sigma_part().size() > cur.sigma_part().size());
      }
    }
  }
}

TEST_CASE("simple roots of A2") {
  auto d = datum("sl3_so21");
  CHECK(simple_roots(PositiveSystem(d, QVector{1, 1})) == std::vector<std::size_t>{0, 2});
  CHECK_THROWS_WITH_AS(PositiveSystem(d, QVector{1, 2}), doctest::Contains("NotRegular"), Error);
}

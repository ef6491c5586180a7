#include "oracles.hpp"

#include "symconv/error.hpp"
#include "symconv/matrixgrp.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace symconv;

namespace {

Mat random_sl(std::mt19937_64& rng, const Realization& R) {
  std::normal_distribution<double> N(0, 0.6);
  Mat X = Mat::Zero(R.n, R.n);
  for (const auto& [start, size] : R.blocks) {
    Mat Y(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) Y(i, j) = N(rng);
    Y -= (Y.trace() / size) * Mat::Identity(size, size);
    X.block(start, start, size, size) = Y;
  }
  return expm(X);
}

Mat diag2(double t) {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = std::exp(t);
  a(1, 1) = std::exp(-t);
  return a;
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("realizations are consistent with their data") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  for (const auto& name : Realization::preset_names()) {
    CAPTURE(name);
    auto R = Realization::preset(name);
    CHECK_NOTHROW(R.validate());
    for (int t = 0; t < 1000; ++t) {
      Mat X = Mat::NullaryExpr(R.n, R.n, [&] { return N(rng); });
      CHECK(max_abs(R.sigma(R.theta(X)) - R.theta(R.sigma(X))) <= 1e-12);
    }
    for (std::size_t w = 0; w < R.w_kh().order(); ++w) {
      const Mat& x = R.weyl_rep(w);
      CHECK(max_abs(x.transpose() * x - Mat::Identity(R.n, R.n)) <= 1e-12);
      CHECK(max_abs(R.sigma_group(x) - x) <= 1e-12);
      for (const auto& q : R.datum->a_q_basis()) {
        Mat Y = x * R.a_matrix(to_eigen(q)) * x.transpose();
        CHECK(max_abs(Y - Mat(Y.diagonal().asDiagonal())) <= 1e-12);
      }
    }
  }
}

TEST_CASE("iwasawa examples") {
  auto R = Realization::preset("kostant_sl2");
  const auto P = R.base_parabolic();
  SUBCASE("identity") {
    auto t = iwasawa(R, Mat::Identity(2, 2), P);
    CHECK(max_abs(t.k - Mat::Identity(2, 2)) == 0);
    CHECK(t.H.norm() == 0);
    CHECK(max_abs(t.n - Mat::Identity(2, 2)) == 0);
  }
  SUBCASE("lower unipotent: H = 1/2 log(1 + x^2) diag(1,-1)") {
    for (double x : {-3.0, -0.5, 0.0, 0.25, 2.0, 7.0}) {
      Mat n = Mat::Identity(2, 2);
      n(1, 0) = x;
      CHECK(iwasawa_H(R, n, P)(0) == doctest::Approx(0.5 * std::log1p(x * x)).epsilon(1e-14));
    }
  }
  SUBCASE("a k_phi against Gram-Schmidt and the closed form") {
    for (double t : {-1.0, 0.3, 1.0})
      for (int i = 0; i < 100; ++i) {
        double phi = 0.0628 * i;
        Mat k(2, 2);
        k << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
        double H = iwasawa_H(R, diag2(t) * k, P)(0);
        double cf = 0.5 * std::log(std::exp(2 * t) * std::pow(std::cos(phi), 2) + std::exp(-2 * t) * std::pow(std::sin(phi), 2));
        CHECK(std::abs(H - cf) <= 1e-13);
        CHECK(std::abs(H - oracle::gram_schmidt_log_diag(diag2(t) * k)(0)) <= 1e-12);
      }
  }
  SUBCASE("singular input") {
    CHECK_THROWS_WITH_AS(iwasawa(R, Mat::Zero(2, 2), P), doctest::Contains("SingularInput"), Error);
  }
}

TEST_CASE("property: Iwasawa reconstruction and uniqueness for every preset and positive system") {
  std::mt19937_64 rng(5);
  for (const auto& name : Realization::preset_names()) {
    CAPTURE(name);
    auto R = Realization::preset(name);
    for (const auto& P : enumerate_positive_systems(R.datum, R.base_chamber)) {
      auto units = R.units_np(P);
      for (int t = 0; t < 300; ++t) {
        Mat g = random_sl(rng, R);
        auto tr = iwasawa(R, g, P);
        Mat A = R.a_matrix(tr.H).diagonal().array().exp().matrix().asDiagonal();
        Mat rec = tr.k * A * tr.n;
        CHECK(max_abs(rec - g) / std::max(1.0, max_abs(g)) <= 1e-9);
        CHECK(max_abs(tr.k.transpose() * tr.k - Mat::Identity(R.n, R.n)) <= 1e-12);
        // n is unipotent and supported on n_P
        Mat L = log_unipotent(tr.n);
        Mat rest = L;
        for (const auto& u : units) rest(u.row, u.col) = 0;
        CHECK(max_abs(rest) <= 1e-9 * std::max(1.0, max_abs(L)));
        auto again = iwasawa(R, rec, P);
        CHECK((again.H - tr.H).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(max_abs(again.k - tr.k) <= 1e-9);
      }
    }
  }
}

TEST_CASE("h_pq examples") {
  SUBCASE("SL(2)/SO(1,1): closed form in s and t, equal to log a at s = 0") {
    auto R = Realization::preset("sl2_so11");
    for (double t : {-1.0, 0.0, 0.7})
      for (double s : {-5.0, -1.0, 0.0, 0.5, 5.0}) {
        Mat h(2, 2);
        h << std::cosh(s), std::sinh(s), std::sinh(s), std::cosh(s);
        double r = h_pq(R, diag2(t) * h, R.base_parabolic())(0);
        double cf = 0.5 * std::log(std::exp(2 * t) + 2 * std::cosh(2 * t) * std::sinh(s) * std::sinh(s));
        CHECK(std::abs(r - cf) <= 1e-12 * std::max(1.0, std::abs(cf)));
        if (s == 0) CHECK(std::abs(r - t) <= 1e-15);
      }
  }
  SUBCASE("elements of P and H project to 0") {
    auto R = Realization::preset("sl3_so21");
    for (const auto& z : R.z_reps) CHECK(h_pq(R, z, R.base_parabolic()).norm() <= 1e-15);
  }
  SUBCASE("group case: (g, g) against one-factor Gram-Schmidt") {
    auto R = Realization::preset("group_sl2");
    std::mt19937_64 rng(9);
    std::normal_distribution<double> N;
    PositiveSystem PxPbar(R.datum, QVector{1, -1});
    PositiveSystem PxP(R.datum, QVector{1, 1});
    for (int t = 0; t < 100; ++t) {
      Mat g0(2, 2);
      g0 << N(rng), N(rng), N(rng), N(rng);
      if (g0.determinant() < 0) g0.col(0) *= -1;
      g0 /= std::sqrt(g0.determinant());
      Mat g = Mat::Zero(4, 4);
      g.block(0, 0, 2, 2) = g0;
      g.block(2, 2, 2, 2) = g0;
      double u = std::log(g0.col(0).norm());   // H_P(g0) in the diag(1,-1) coordinate
      double v = -std::log(g0.col(1).norm());  // H_{P-bar}(g0)
      Vec y = h_pq(R, g, PxPbar);
      CHECK(std::abs(y(0) - 0.5 * (u - v)) <= 1e-12);
      CHECK(std::abs(y(1) - 0.5 * (v - u)) <= 1e-12);
      CHECK(h_pq(R, g, PxP).norm() <= 1e-12);
    }
  }
}

TEST_CASE("property: h_pq is left (K and H)- and right (P and H)-invariant") {
  std::mt19937_64 rng(13);
  for (const auto& name : Realization::preset_names()) {
    CAPTURE(name);
    auto R = Realization::preset(name);
    const auto P = R.base_parabolic();
    auto hs = sample_H(R, 1.0, 50, 21);
    auto gs = sample_H(R, 2.0, 50, 22);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      Mat kh = R.weyl_rep(i % R.w_kh().order()) * R.z_reps[i % R.z_reps.size()];
      Mat np = Mat::Identity(R.n, R.n);
      auto bnh = R.basis_np_h(P);
      std::normal_distribution<double> N;
      Mat U = Mat::Zero(R.n, R.n);
      for (const auto& b : bnh) U += N(rng) * b;
      np = exp_nilpotent(U);
      Mat g = gs[i].h;
      CHECK((h_pq(R, kh * g * np, P) - h_pq(R, g, P)).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("sample_H") {
  for (const auto& name : Realization::preset_names()) {
    CAPTURE(name);
    auto R = Realization::preset(name);
    auto a = sample_H(R, 3.0, 200, 42), b = sample_H(R, 3.0, 200, 42);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(max_abs(a[i].h - b[i].h) == 0);
      CHECK(max_abs(R.sigma_group(a[i].h) - a[i].h) <= 1e-12 * std::max(1.0, max_abs(a[i].h)));
      Vec c(a[i].coeff_k.size() + a[i].coeff_p.size());
      c << a[i].coeff_k, a[i].coeff_p;
      CHECK(c.norm() <= 3.0 + 1e-12);
    }
    for (const auto& s : sample_H(R, 0.0, 50, 1)) CHECK(max_abs(s.h - R.z_reps[s.z_index]) == 0);
  }
}

TEST_CASE("nilpotent factorization") {
  SUBCASE("examples") {
    auto R = Realization::preset("sl3_so21");
    const auto P = R.base_parabolic();
    Mat U = Mat::Zero(3, 3);
    U(0, 1) = 1;
    U(0, 2) = 1;
    Mat n = exp_nilpotent(U);
    auto f = factor_nilpotent(R, n, P);
    CHECK(max_abs(f.n_plus * f.n_H - n) <= 1e-12);
    CHECK(max_abs(f.n_H - Mat::Identity(3, 3)) <= 1e-12);
  }
  SUBCASE("pure factors and round trips") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> N;
    for (const auto& name : Realization::preset_names()) {
      CAPTURE(name);
      auto R = Realization::preset(name);
      for (const auto& P : enumerate_positive_systems(R.datum, R.base_chamber)) {
        for (int t = 0; t < 100; ++t) {
          Mat n = sample_NP(R, P, 1.0, rng);
          auto f = factor_nilpotent(R, n, P);
          CHECK(max_abs(f.n_plus * f.n_H - n) <= 1e-10);
          CHECK(max_abs(R.sigma_group(f.n_H) - f.n_H) <= 1e-12);
          auto g = factor_nilpotent(R, f.n_H, P);
          CHECK(max_abs(g.n_plus - Mat::Identity(R.n, R.n)) <= 1e-12);
          auto h = factor_nilpotent(R, f.n_plus, P);
          CHECK(max_abs(h.n_H - Mat::Identity(R.n, R.n)) <= 1e-12);
        }
      }
    }
  }
  SUBCASE("errors") {
    auto R = Realization::preset("sl3_so21");
    Mat bad = Mat::Identity(3, 3);
    bad(2, 0) = 1;
    CHECK_THROWS_WITH_AS(factor_nilpotent(R, bad, R.base_parabolic()), doctest::Contains("NotInNP"), Error);
    CHECK_THROWS_WITH_AS(log_unipotent(2 * Mat::Identity(3, 3)), doctest::Contains("NotUnipotent"), Error);
  }
}

TEST_CASE("P and H split") {
  SUBCASE("identity") {
    auto R = Realization::preset("sl3_so21");
    auto s = check_PH_split(R, Mat::Identity(3, 3), R.base_parabolic());
    CHECK(max_abs(s.l - Mat::Identity(3, 3)) <= 1e-12);
    CHECK(max_abs(s.n - Mat::Identity(3, 3)) <= 1e-12);
  }
  SUBCASE("A and H") {
    auto R = Realization::preset("group_sl2");
    Mat p = Vec::Map(std::vector<double>{2, 0.5, 2, 0.5}.data(), 4).asDiagonal();
    auto s = check_PH_split(R, p, R.base_parabolic());
    CHECK(max_abs(s.l - p) <= 1e-12);
    CHECK(max_abs(s.n - Mat::Identity(4, 4)) <= 1e-12);
  }
  SUBCASE("group case (x, x) with x = b n upper triangular") {
    auto R = Realization::preset("group_sl2");
    Mat x(2, 2);
    x << 2, 3, 0, 0.5;
    Mat p = Mat::Zero(4, 4);
    p.block(0, 0, 2, 2) = x;
    p.block(2, 2, 2, 2) = x;
    auto s = check_PH_split(R, p, R.base_parabolic());
    Mat b = Mat::Zero(4, 4), n = Mat::Identity(4, 4);
    b.diagonal() << 2, 0.5, 2, 0.5;
    n(0, 1) = 1.5;
    n(2, 3) = 1.5;
    CHECK(max_abs(s.l - b) <= 1e-12);
    CHECK(max_abs(s.n - n) <= 1e-12);
  }
  SUBCASE("not in P and H") {
    auto R = Realization::preset("sl3_so21");
    Mat g = Mat::Identity(3, 3);
    g(0, 1) = 1;
    CHECK_THROWS_WITH_AS(check_PH_split(R, g, R.base_parabolic()), doctest::Contains("NotInPH"), Error);
  }
}

TEST_CASE("gk samples") {
  auto R = Realization::preset("kostant_sl2");
  const auto P = R.base_parabolic();
  CHECK(gk_sample(R, P, P.opposite(), Mat::Identity(2, 2)).norm() == 0);
  std::mt19937_64 rng(1);
  CHECK(gk_sample(R, P, P, sample_gk(R, P, P, 1.0, rng)).norm() == 0);
  Mat n = Mat::Identity(2, 2);
  n(1, 0) = 3;
  CHECK(gk_sample(R, P, P.opposite(), n)(0) == doctest::Approx(0.5 * std::log(10.0)).epsilon(1e-14));
}

TEST_CASE("split_seed is deterministic and spreads") {
  CHECK(split_seed(1, 0) == split_seed(1, 0));
  CHECK(split_seed(1, 0) != split_seed(1, 1));
  CHECK(split_seed(1, 0) != split_seed(2, 0));
}

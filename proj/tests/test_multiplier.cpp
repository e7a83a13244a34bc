#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlwave/symbol.hpp"

using namespace nlwave;

namespace {

VecD vec2(double x, double y) {
  VecD v(2);
  v[0] = x;
  v[1] = y;
  return v;
}

LameConstants constants(double s) { return compute_lame_constants(2, s); }

}  // namespace

TEST_CASE("m1 and m2 at the origin and at infinity") {
  LameConstants c = constants(0.5);
  const double lambda = 2.0;
  auto [m1_0, m2_0] = multiplier_m1_m2(c, lambda, VecD::Zero(2));
  CHECK(m1_0 == doctest::Approx(1.0 / lambda).epsilon(1e-14));
  CHECK(m2_0 == 0.0);

  // |xi| = 2^10: within 1% of the asymptotic limits
  auto [m1_inf, m2_inf] = multiplier_m1_m2(c, lambda, vec2(1024.0, 0));
  CHECK(m1_inf == doctest::Approx(1.0 / c.l1).epsilon(0.01));
  CHECK(m2_inf == doctest::Approx(c.l2 / (c.l1 + c.l2)).epsilon(0.01));
}

TEST_CASE("multiplier ranges: m1 > 0 and 0 <= m2 < 1 everywhere") {
  for (double s : {0.25, 0.5, 0.75}) {
    LameConstants c = constants(s);
    for (double lambda : {0.5, 1.0, 2.0}) {
      for (int j = -6; j <= 12; ++j) {
        VecD xi = std::ldexp(1.0, j) * vec2(0.8, -0.6);
        auto [m1, m2] = multiplier_m1_m2(c, lambda, xi);
        CHECK(m1 > 0);
        CHECK(m2 >= 0);
        CHECK(m2 < 1.0);
        CHECK(m1 <= 2.0 * std::max(1.0 / lambda, 1.0 / c.l1) + 1e-12);
      }
    }
  }
}

TEST_CASE("m2 is monotone increasing along rays") {
  LameConstants c = constants(0.25);
  const double lambda = 1.0;
  VecD dir = vec2(0.6, 0.8);
  double prev = -1;
  for (double r = 0.01; r < 600.0; r *= 1.7) {
    auto [m1, m2] = multiplier_m1_m2(c, lambda, r * dir);
    CHECK(m2 > prev);
    prev = m2;
  }
}

TEST_CASE("m2 factors through G_a") {
  LameConstants c = constants(0.5);
  const double lambda = 1.3;
  double a = lambda / ((c.l1 + c.l2) * std::pow(4 * kPi * kPi, c.s));
  for (double r : {0.3, 1.0, 5.0}) {
    VecD xi = r * vec2(1, 2) / std::sqrt(5.0);
    auto [m1, m2] = multiplier_m1_m2(c, lambda, xi);
    double expect = c.l2 / (c.l1 + c.l2) *
                    multiplier_g_a(xi.squaredNorm(), c.s, a);
    CHECK(m2 == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("bessel-normalized symbol inverts exactly") {
  LameConstants c = constants(0.75);
  const double lambda = 0.8;
  for (double r : {0.1, 1.0, 30.0}) {
    VecD xi = r * vec2(-0.28, 0.96);
    MatD M = bessel_normalized_symbol(c, lambda, xi);
    MatD Minv = bessel_normalized_inverse(c, lambda, xi);
    CHECK((Minv * M - MatD::Identity(2, 2)).norm() <= 1e-12);
  }
  // xi = 0: M = lambda (1)^{-s} I, inverse = I/lambda
  MatD M0inv = bessel_normalized_inverse(c, lambda, VecD::Zero(2));
  CHECK((M0inv - MatD::Identity(2, 2) / lambda).norm() <= 1e-13);
}

TEST_CASE("marcinkiewicz: constant symbol has vanishing derivative rows") {
  auto rep = marcinkiewicz_check([](const VecD&) { return 1.0; }, 2,
                                 "constant", -2, 6);
  CHECK(rep.pass);
  for (const auto& row : rep.rows) {
    if (row.mask == 0)
      CHECK(row.weighted_sup == doctest::Approx(1.0));
    else
      CHECK(row.weighted_sup <= 1e-8);
  }
}

TEST_CASE("marcinkiewicz condition holds for m1 and m2") {
  for (double s : {0.25, 0.75}) {
    LameConstants c = constants(s);
    for (double lambda : {0.5, 2.0}) {
      auto r1 = marcinkiewicz_check_m(1, c, lambda);
      auto r2 = marcinkiewicz_check_m(2, c, lambda);
      CAPTURE(s);
      CAPTURE(lambda);
      CHECK(r1.pass);
      CHECK(r2.pass);
      // gamma = 0 row: sup of the symbol itself
      CHECK(r1.rows[0].weighted_sup <=
            2.0 * std::max(1.0 / lambda, 1.0 / c.l1) + 1e-12);
      CHECK(r2.rows[0].weighted_sup < 1.0);
      CHECK(r2.g_a == doctest::Approx(lambda / ((c.l1 + c.l2) *
                                                std::pow(4 * kPi * kPi, c.s))));
      // the mixed derivative gamma = (1,1) stays finite
      for (const auto& row : r2.rows)
        CHECK(std::isfinite(row.weighted_sup));
    }
  }
}

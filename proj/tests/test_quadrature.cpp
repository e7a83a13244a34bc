#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlwave/quadrature.hpp"

using namespace nlwave;

TEST_CASE("gauss rule integrates polynomials and sin exactly") {
  auto cube = [](double x) { return x * x * x - 2 * x + 1; };
  CHECK(integrate_gl(cube, -1.0, 3.0, 8) ==
        doctest::Approx(16.0).epsilon(1e-13));
  CHECK(integrate_gl([](double x) { return std::sin(x); }, 0.0, kPi, 24) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("stable series evaluation near zero") {
  for (double w : {1e-9, 1e-6, 1e-3, 0.3}) {
    CHECK(one_minus_cos(w) ==
          doctest::Approx(w * w / 2 - std::pow(w, 4) / 24).epsilon(1e-6));
    CHECK(w_minus_sin(w) ==
          doctest::Approx(std::pow(w, 3) / 6 - std::pow(w, 5) / 120)
              .epsilon(1e-6));
  }
}

// closed forms of the infinite singular integrals, frozen from a
// high-precision quadrature oracle
TEST_CASE("infinite-range closed forms") {
  CHECK(kc_infinity(0.25) == doctest::Approx(2.5066282746310005).epsilon(1e-14));
  CHECK(kc_infinity(0.5) == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(kc_infinity(0.75) == doctest::Approx(1.671085516420667).epsilon(1e-14));
  CHECK(ks_infinity(0.25) == doctest::Approx(2.5066282746310005).epsilon(1e-14));
  CHECK(kws_infinity(0.75) == doctest::Approx(1.671085516420667).epsilon(1e-14));
  // continuity of kc across s = 1/2
  CHECK(kc_infinity(0.5 - 1e-7) == doctest::Approx(kPi / 2).epsilon(1e-5));
  CHECK(kc_infinity(0.5 + 1e-7) == doctest::Approx(kPi / 2).epsilon(1e-5));
}

// finite-range values frozen from the same oracle
TEST_CASE("finite-range radial integrals match the oracle") {
  CHECK(fc(2.0, 0.25) == doctest::Approx(0.81897190284606114).epsilon(1e-12));
  CHECK(fc(2.0, 0.75) == doctest::Approx(1.3265825323346743).epsilon(1e-12));
  CHECK(fc(17.0, 0.5) == doctest::Approx(1.515126807750019).epsilon(1e-12));
  CHECK(fc(123.0, 0.25) == doctest::Approx(2.3266234695595874).epsilon(1e-12));
  CHECK(fc(123.0, 0.75) == doctest::Approx(1.6705994385236495).epsilon(1e-12));
  CHECK(fsin(2.0, 0.25) == doctest::Approx(2.4905573141411923).epsilon(1e-12));
  CHECK(fsin(60.0, 0.125) == doctest::Approx(1.8815236228195258).epsilon(1e-12));
  CHECK(fws(2.0, 0.75) == doctest::Approx(0.28890020664764841).epsilon(1e-12));
  CHECK(fws(90.0, 0.75) == doctest::Approx(1.460261503563255).epsilon(1e-12));
  CHECK(fws(2.0, 0.25) == doctest::Approx(0.33786981060499782).epsilon(1e-12));
  CHECK(fhalf(5.0, 0.7) == doctest::Approx(-0.78121438431318333).epsilon(1e-12));
  CHECK(fhalf(200.0, 1.0) == doctest::Approx(-0.42277237549150929).epsilon(1e-12));
}

TEST_CASE("oscillatory tails match direct integration") {
  for (double X : {25.0, 47.0, 80.0}) {
    for (double s : {0.25, 0.5, 0.75}) {
      auto [Ic, Is] = oscillatory_tails(X, -1.0 - 2.0 * s);
      // brute force over many periods plus the next tail as remainder
      double ic = 0, is = 0;
      double hi = X + 400 * kPi;
      int n = static_cast<int>((hi - X) / kPi);
      for (int i = 0; i < n; ++i) {
        double a = X + (hi - X) * i / n, b = X + (hi - X) * (i + 1) / n;
        ic += integrate_gl(
            [&](double w) { return std::cos(w) * std::pow(w, -1 - 2 * s); }, a,
            b, 12);
        is += integrate_gl(
            [&](double w) { return std::sin(w) * std::pow(w, -1 - 2 * s); }, a,
            b, 12);
      }
      auto [tic, tis] = oscillatory_tails(hi, -1.0 - 2.0 * s);
      CHECK(Ic == doctest::Approx(ic + tic).epsilon(1e-10));
      CHECK(Is == doctest::Approx(is + tis).epsilon(1e-10));
    }
  }
}

TEST_CASE("segment values are consistent with differences") {
  for (double s : {0.25, 0.75}) {
    CHECK(fc_seg(1.0, 30.0, s) ==
          doctest::Approx(fc(30.0, s) - fc(1.0, s)).epsilon(1e-11));
    CHECK(fws_seg(1.0, 30.0, s) ==
          doctest::Approx(fws(30.0, s) - fws(1.0, s)).epsilon(1e-11));
  }
  CHECK(fsin_seg(0.5, 90.0, 0.25) ==
        doctest::Approx(fsin(90.0, 0.25) - fsin(0.5, 0.25)).epsilon(1e-11));
  // fhalf decomposes into the compensated head plus a pure sine segment
  CHECK(fhalf_seg(0.0, 5.0, 0.7) == doctest::Approx(fhalf(5.0, 0.7)).epsilon(1e-12));
  CHECK(fhalf_seg(0.2, 5.0, 0.7) ==
        doctest::Approx(fhalf(5.0, 0.7) - fhalf(0.2, 0.7)).epsilon(1e-10));
}

TEST_CASE("finite values approach the closed forms as X grows") {
  CHECK(fc(1e6, 0.4) == doctest::Approx(kc_infinity(0.4)).epsilon(1e-4));
  CHECK(fsin(1e6, 0.3) == doctest::Approx(ks_infinity(0.3)).epsilon(1e-4));
  CHECK(fws(1e8, 0.8) == doctest::Approx(kws_infinity(0.8)).epsilon(1e-4));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlwave/kernel.hpp"
#include "nlwave/rng.hpp"

using namespace nlwave;

namespace {

VecD vec2(double x, double y) {
  VecD v(2);
  v[0] = x;
  v[1] = y;
  return v;
}

SingularKernel fractional(int d, double s) {
  SingularKernel k;
  k.dim = d;
  k.s = s;
  k.m = DirectionWeight::constant(1.0);
  k.cone = ConeSpec::Full(d);
  k.truncation = std::numeric_limits<double>::infinity();
  return k;
}

}  // namespace

TEST_CASE("cone membership") {
  ConeSpec full = ConeSpec::Full(2);
  CHECK(full.contains(vec2(0.3, -2.0)));
  CHECK_THROWS_AS(full.contains(vec2(0, 0)), std::domain_error);

  ConeSpec cap = ConeSpec::CapUnion(2, {{vec2(1, 0), kPi / 6}});
  CHECK(cap.contains(vec2(1, 0)));
  CHECK(cap.contains(vec2(-1, 0)));  // symmetrized double cone
  CHECK(cap.contains(vec2(1, 0.3)));
  CHECK_FALSE(cap.contains(vec2(0, 1)));
}

TEST_CASE("cone invariants rejected") {
  CHECK_THROWS_AS(ConeSpec::CapUnion(2, {{vec2(2, 0), kPi / 6}}), config_error);
  CHECK_THROWS_AS(ConeSpec::CapUnion(2, {{vec2(1, 0), 0.0}}), config_error);
  CHECK_THROWS_AS(ConeSpec::CapUnion(2, {{vec2(1, 0), 4.0}}), config_error);
}

TEST_CASE("cone surface measure") {
  CHECK(ConeSpec::Full(2).surface_measure() ==
        doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(ConeSpec::Full(3).surface_measure() ==
        doctest::Approx(4 * kPi).epsilon(1e-12));
  // a half-angle pi/2 cap symmetrizes to the whole circle
  ConeSpec hemi = ConeSpec::CapUnion(2, {{vec2(1, 0), kPi / 2}});
  CHECK(hemi.surface_measure() == doctest::Approx(kTwoPi).epsilon(1e-12));
  // cap-area formula oracle: 2 * 2 pi (1 - cos(pi/6))
  VecD e1 = VecD::Zero(3);
  e1[0] = 1;
  ConeSpec cap3 = ConeSpec::CapUnion(3, {{e1, kPi / 6}});
  CHECK(cap3.surface_measure() ==
        doctest::Approx(1.6835744289538659).epsilon(1e-8));
  // overlapping caps do not double count
  ConeSpec twice = ConeSpec::CapUnion(2, {{vec2(1, 0), kPi / 6},
                                          {vec2(1, 0), kPi / 6}});
  CHECK(twice.surface_measure() ==
        doctest::Approx(4 * kPi / 6).epsilon(1e-12));
}

TEST_CASE("class B evaluation") {
  SingularKernel k = fractional(2, 0.5);
  CHECK(k.eval(vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(k.eval(vec2(0, 0)), std::domain_error);

  SingularKernel cone = fractional(2, 0.5);
  cone.cone = ConeSpec::CapUnion(2, {{vec2(1, 0), kPi / 6}});
  CHECK(cone.eval(vec2(0, 1)) == 0.0);

  SingularKernel trunc = fractional(2, 0.25);
  trunc.truncation = 2.0;
  CHECK(trunc.eval(vec2(3, 0)) == 0.0);
  CHECK(trunc.eval(vec2(1.5, 0)) ==
        doctest::Approx(std::pow(1.5, -2.5)).epsilon(1e-14));
}

TEST_CASE("class B comparability bounds on random samples") {
  Rng rng(7);
  SingularKernel k = fractional(2, 0.375);
  DirectionWeight w;
  w.c0 = 1.0;
  w.c1 = 0.4;
  w.c2 = 0.3;
  w.axis = vec2(0.6, 0.8);
  k.m = w;
  k.cone = ConeSpec::CapUnion(2, {{vec2(1, 1) / std::sqrt(2.0), 1.0}});
  k.truncation = 3.0;
  double a1 = k.alpha1(), a2 = k.alpha2();
  CHECK(a1 > 0);
  for (int i = 0; i < 500; ++i) {
    VecD y = vec2(rng.normal(), rng.normal());
    y *= std::exp(2.0 * (rng.uniform() - 0.5)) / y.norm();
    double v = k.eval(y);
    if (v == 0.0) continue;
    double ref = std::pow(y.norm(), -2.0 - 2.0 * k.s);
    CHECK(v >= a1 * ref * (1 - 1e-12));
    CHECK(v <= a2 * ref * (1 + 1e-12));
  }
}

TEST_CASE("class A families") {
  IntegrableKernel g;
  g.dim = 2;
  g.family = GaussianKernel{0.2, 1.0};
  // the family's normalizing peak value at 0: mass / (2 pi sigma^2)
  CHECK(g.eval(VecD::Zero(2)) ==
        doctest::Approx(3.9788735772973834).epsilon(1e-14));
  CHECK(g.is_even());
  CHECK(g.is_radial());

  IntegrableKernel b;
  b.dim = 2;
  b.family = BallKernel{0.5, 2.0};
  CHECK(b.eval(vec2(0.25, 0)) == doctest::Approx(2.0 / (kPi * 0.25)).epsilon(1e-14));
  CHECK(b.eval(vec2(0.75, 0)) == 0.0);
  CHECK(b.l1_mass() == 2.0);

  IntegrableKernel o;
  o.dim = 2;
  o.family = OffsetGaussianKernel{0.2, vec2(0.1, 0), 1.0};
  CHECK_FALSE(o.is_even());
  CHECK_FALSE(o.is_radial());
  CHECK(o.eval(vec2(0.1, 0)) > o.eval(vec2(-0.1, 0)));
}

TEST_CASE("compensator rule") {
  CHECK(Compensator{0.25}.rule() == Compensator::Case::Zero);
  CHECK(Compensator{0.5}.rule() == Compensator::Case::UnitBall);
  CHECK(Compensator{0.75}.rule() == Compensator::Case::One);
  CHECK(Compensator{0.5}(vec2(0.5, 0)) == 1.0);
  CHECK(Compensator{0.5}(vec2(1.5, 0)) == 0.0);
}

TEST_CASE("homotopy endpoints") {
  SingularKernel base = fractional(2, 0.4);
  DirectionWeight w;
  w.c0 = 1.2;
  w.c2 = 0.5;
  w.axis = vec2(1, 0);
  base.m = w;
  base.truncation = 2.0;
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    VecD y = vec2(rng.normal(), rng.normal());
    y *= std::exp(2.0 * (rng.uniform() - 0.5)) / y.norm();
    HomotopyKernel h1{base, 1.0};
    CHECK(h1.eval(y) == doctest::Approx(base.eval(y)).epsilon(1e-14));
    HomotopyKernel h0{base, 0.0};
    double ref = base.alpha1() * std::pow(y.norm(), -2.0 - 2.0 * base.s);
    CHECK(h0.eval(y) == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("modified kernel") {
  SingularKernel base = fractional(2, 0.3);
  base.truncation = 1.0;
  HomotopyKernel h{base, 0.7};
  ModifiedKernel mk = modified_kernel(h);
  // inside B_r the indicator vanishes
  CHECK(mk.eval(vec2(0.5, 0)) == doctest::Approx(h.eval(vec2(0.5, 0))).epsilon(1e-14));
  // outside: the fractional floor is restored
  double y = 2.0;
  double expect = h.eval(vec2(y, 0)) + 0.7 * std::pow(y, -2.0 - 0.6);
  CHECK(mk.eval(vec2(y, 0)) == doctest::Approx(expect).epsilon(1e-14));
  // lower bound alpha1 |y|^{-d-2s} <= modified on the cone, all t
  Rng rng(3);
  for (double t : {0.0, 0.4, 1.0}) {
    ModifiedKernel m2 = modified_kernel({base, t});
    for (int i = 0; i < 200; ++i) {
      VecD p = vec2(rng.normal(), rng.normal());
      p *= std::exp(2.5 * (rng.uniform() - 0.5)) / p.norm();
      double ref = std::pow(p.norm(), -2.0 - 0.6);
      CHECK(m2.eval(p) >= ref * (1 - 1e-12));
      CHECK(m2.eval(p) <= 1.0 * ref * (1 + 1e-12));  // alpha2 = alpha1 = 1 here
    }
  }
  // r = infinity: modified coincides with the homotopy kernel
  SingularKernel inf_base = fractional(2, 0.3);
  ModifiedKernel m3 = modified_kernel({inf_base, 0.5});
  CHECK(m3.eval(vec2(5, 1)) ==
        doctest::Approx(HomotopyKernel{inf_base, 0.5}.eval(vec2(5, 1)))
            .epsilon(1e-14));
}

TEST_CASE("cancellation condition") {
  // even direction factor: always satisfied (5 radii)
  SingularKernel even = fractional(2, 0.5);
  DirectionWeight w;
  w.c0 = 1.0;
  w.c2 = 0.8;
  w.axis = vec2(0, 1);
  even.m = w;
  auto rep = check_cancellation(even, {0.3, 0.7, 1.0, 1.9, 3.1});
  CHECK(rep.pass);

  // m(y) = 1 + (1/2) y1/|y| fails with a nonzero (1,1,1) moment:
  // integral of cos^3(1 + cos/2) over the circle = 3 pi / 8, alpha2 = 3/2
  SingularKernel odd = fractional(2, 0.5);
  DirectionWeight wo;
  wo.c0 = 1.0;
  wo.c1 = 0.5;
  wo.axis = vec2(1, 0);
  odd.m = wo;
  auto rep2 = check_cancellation(odd, {1.0});
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.worst_i == 0);
  CHECK(rep2.worst_j == 0);
  CHECK(rep2.worst_k == 0);
  CHECK(rep2.max_normalized_moment ==
        doctest::Approx(3.0 * kPi / 8.0 / 1.5).epsilon(1e-10));

  // constant m on any cone: odd integrand over a symmetric set
  SingularKernel cone = fractional(2, 0.5);
  cone.cone = ConeSpec::CapUnion(2, {{vec2(0.8, 0.6), 0.7}});
  CHECK(check_cancellation(cone, {0.5, 1.0, 2.0}).pass);
}

TEST_CASE("n2 constant") {
  SingularKernel k = fractional(2, 0.5);
  k.truncation = 1.0;
  auto n2 = n2_constant(k);
  CHECK_FALSE(n2.infinite_radius);
  CHECK(n2.value == doctest::Approx(8 * kPi).epsilon(1e-10));
  k.truncation = 4.0;
  CHECK(n2_constant(k).value == doctest::Approx(2 * kPi).epsilon(1e-10));
  k.truncation = std::numeric_limits<double>::infinity();
  auto lim = n2_constant(k);
  CHECK(lim.infinite_radius);
  CHECK(lim.value == 0.0);
}

TEST_CASE("kernel spec validation errors") {
  SingularKernel bad = fractional(2, 1.5);
  CHECK_THROWS_AS(KernelSpec::singular(bad), config_error);
  IntegrableKernel badg;
  badg.dim = 2;
  badg.family = GaussianKernel{-0.1, 1.0};
  CHECK_THROWS_AS(KernelSpec::integrable(badg), config_error);
  IntegrableKernel badmass;
  badmass.dim = 2;
  badmass.family = BallKernel{0.5, -2.0};
  CHECK_THROWS_AS(KernelSpec::integrable(badmass), config_error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "nlwave/field.hpp"
#include "nlwave/rng.hpp"
#include "nlwave/smooth_field.hpp"

using namespace nlwave;

namespace {

GridSpec grid2(int n, double L = 1.0) { return GridSpec{2, n, L}; }

VectorField random_field(const GridSpec& g, Rng& rng) {
  VectorField u(g);
  for (int c = 0; c < g.dim; ++c)
    for (std::int64_t j = 0; j < u.num_nodes(); ++j) u(c, j) = rng.normal();
  return u;
}

}  // namespace

TEST_CASE("grid validation") {
  GridSpec too_small{2, 6, 1.0};
  CHECK_THROWS_AS(too_small.validate(), config_error);
  GridSpec not_pow2{2, 48, 1.0};
  CHECK_THROWS_AS(not_pow2.validate(), config_error);
  GridSpec bad_dim{4, 16, 1.0};
  CHECK_THROWS_AS(bad_dim.validate(), config_error);
  GridSpec fine{3, 16, 2.5};
  CHECK_NOTHROW(fine.validate());
}

TEST_CASE("frequencies cover [-N/2, N/2)") {
  GridSpec g = grid2(8, 2.0);
  std::set<std::pair<int, int>> seen;
  for (std::int64_t m = 0; m < g.num_nodes(); ++m) {
    auto k = g.mode_indices(m);
    CHECK(k[0] >= -4);
    CHECK(k[0] < 4);
    seen.insert({k[0], k[1]});
    VecD xi = g.frequency(m);
    CHECK(xi[0] == doctest::Approx(k[0] / 2.0));
  }
  CHECK(seen.size() == 64);
}

TEST_CASE("constant field transforms to a lone zero coefficient") {
  GridSpec g = grid2(16);
  VectorField u(g);
  for (std::int64_t j = 0; j < u.num_nodes(); ++j) u(0, j) = 3.5;
  SpectralField uh = forward_transform(u);
  CHECK(uh(0, 0).real() == doctest::Approx(3.5).epsilon(1e-13));
  for (std::int64_t m = 1; m < uh.num_modes(); ++m)
    CHECK(uh.at(m).norm() <= 1e-13);
}

TEST_CASE("single continuum mode maps to a lone coefficient") {
  GridSpec g = grid2(32, 2.0);
  VectorField u(g);
  std::array<int, 3> k{3, -5, 0};
  for (std::int64_t j = 0; j < u.num_nodes(); ++j) {
    VecD x = g.position(j);
    double ph = kTwoPi * (k[0] * x[0] + k[1] * x[1]) / g.length;
    u(0, j) = std::cos(ph);
    u(1, j) = -2.0 * std::sin(ph);
  }
  SpectralField uh = forward_transform(u);
  std::int64_t target = -1;
  for (std::int64_t m = 0; m < uh.num_modes(); ++m) {
    auto km = g.mode_indices(m);
    if (km[0] == k[0] && km[1] == k[1]) target = m;
  }
  REQUIRE(target >= 0);
  const double Ld = std::pow(g.length, 2);
  CHECK(uh(0, target).real() == doctest::Approx(0.5 * Ld).epsilon(1e-12));
  CHECK(uh(1, target).imag() == doctest::Approx(Ld).epsilon(1e-12));
}

TEST_CASE("round trip and Parseval on random fields") {
  Rng rng(5);
  for (int n : {8, 16, 64}) {
    GridSpec g = grid2(n, 1.5);
    VectorField u = random_field(g, rng);
    SpectralField uh = forward_transform(u);
    VectorField back = inverse_transform(uh);
    back -= u;
    CHECK(back.max_abs() <= 1e-12 * u.max_abs());

    // Parseval against a direct summation oracle
    double phys = 0;
    for (std::int64_t j = 0; j < u.num_nodes(); ++j)
      phys += u.at(j).squaredNorm();
    phys *= std::pow(g.spacing(), g.dim);
    double spec = 0;
    for (std::int64_t m = 0; m < uh.num_modes(); ++m)
      spec += uh.at(m).squaredNorm();
    spec /= std::pow(g.length, g.dim);
    CHECK(phys == doctest::Approx(spec).epsilon(1e-12));
  }
}

TEST_CASE("conjugate symmetry of real transforms") {
  Rng rng(9);
  GridSpec g = grid2(16);
  VectorField u = random_field(g, rng);
  SpectralField uh = forward_transform(u);
  for (std::int64_t m = 0; m < uh.num_modes(); ++m) {
    std::int64_t cm = g.conjugate_mode(m);
    CVecD diff = uh.at(m) - uh.at(cm).conjugate();
    CHECK(diff.norm() <= 1e-12 * (uh.at(m).norm() + 1e-30));
  }
}

TEST_CASE("sobolev norms") {
  const double s = 0.4;
  GridSpec g = grid2(32);

  // constant field: only the L2 norm survives
  VectorField c(g);
  for (std::int64_t j = 0; j < c.num_nodes(); ++j) c(1, j) = 2.0;
  SobolevNorms nc = sobolev_norms(c, s);
  CHECK(nc.l2 == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(nc.ds <= 1e-12);
  CHECK(nc.d2s <= 1e-12);
  CHECK(nc.bessel == doctest::Approx(nc.l2).epsilon(1e-13));

  // single mode: ||D^{2s} u|| = (2 pi |xi_k|)^{2s} ||u||
  VectorField m(g);
  for (std::int64_t j = 0; j < m.num_nodes(); ++j) {
    VecD x = g.position(j);
    m(0, j) = std::cos(kTwoPi * (3 * x[0] + 2 * x[1]));
  }
  SobolevNorms nm = sobolev_norms(m, s);
  double xin = std::sqrt(13.0);  // |(3,2)|/L with L = 1
  CHECK(nm.d2s ==
        doctest::Approx(std::pow(kTwoPi * xin, 2 * s) * nm.l2).epsilon(1e-12));
  CHECK(nm.ds ==
        doctest::Approx(std::pow(kTwoPi * xin, s) * nm.l2).epsilon(1e-12));

  // per-mode norm equivalence: (1 + (2pi|xi|)^{2s}) / (1+4pi^2|xi|^2)^s
  // lies in [2^{-s}, 2] at every mode
  for (std::int64_t mm = 0; mm < g.num_nodes(); ++mm) {
    double xi2 = g.frequency(mm).squaredNorm();
    double ratio = (1.0 + std::pow(kTwoPi * kTwoPi * xi2, s)) /
                   std::pow(1.0 + 4 * kPi * kPi * xi2, s);
    CHECK(ratio >= std::pow(2.0, -s) - 1e-12);
    CHECK(ratio <= 2.0 + 1e-12);
  }
}

TEST_CASE("lp norms") {
  GridSpec g = grid2(8, 2.0);
  // one-hot field: ||u||_p = h^{d/p} |value|
  VectorField u(g);
  u(0, 5) = -3.0;
  double h = g.spacing();
  for (double p : {1.0, 2.0, 4.0}) {
    CHECK(lp_norm(u, p) ==
          doctest::Approx(std::pow(h * h, 1.0 / p) * 3.0).epsilon(1e-13));
  }
  CHECK(lp_norm(u, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(3.0));

  // p = 2 agrees with the spectral route
  Rng rng(3);
  VectorField r = random_field(g, rng);
  CHECK(lp_norm(r, 2.0) ==
        doctest::Approx(sobolev_norms(r, 0.5).l2).epsilon(1e-12));

  // Hoelder sanity on the unit torus: ||u||_1 <= ||u||_2
  GridSpec gl = grid2(16, 1.0);
  for (int i = 0; i < 5; ++i) {
    VectorField w = random_field(gl, rng);
    CHECK(lp_norm(w, 1.0) <= lp_norm(w, 2.0) * (1 + 1e-12));
  }
}

TEST_CASE("field file round trip") {
  Rng rng(17);
  GridSpec g{3, 8, 0.75};
  VectorField u = random_field(g, rng);
  std::string path =
      (std::filesystem::temp_directory_path() / "nlwave_f.field").string();
  write_field(path, u);
  VectorField back = read_field(path);
  CHECK(back.grid() == g);
  back -= u;
  CHECK(back.max_abs() == 0.0);  // bit-exact payload
  std::filesystem::remove(path);
}

TEST_CASE("csv export writes one row per node") {
  GridSpec g = grid2(8);
  VectorField u(g);
  std::string path =
      (std::filesystem::temp_directory_path() / "nlwave_f.csv").string();
  write_field_csv(path, u);
  std::ifstream is(path);
  int lines = 0;
  std::string line;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 1 + 64);
  std::filesystem::remove(path);
}

TEST_CASE("periodized gaussian: image sum equals fourier series") {
  VecD center(2);
  center[0] = 0.4;
  center[1] = 0.55;
  VecD amp(2);
  amp[0] = 1.0;
  amp[1] = -0.5;
  PeriodizedGaussian pg(2, 1.0, center, 0.09, amp);
  TrigPolynomial tp = pg.to_trig_polynomial();
  Rng rng(1);
  for (int i = 0; i < 40; ++i) {
    VecD x(2);
    x[0] = rng.uniform();
    x[1] = rng.uniform();
    VecD a = pg.eval(x), b = tp.eval(x);
    CHECK((a - b).norm() <= 1e-12 * pg.sup_bound());
    MatD ga = pg.gradient(x), gb = tp.gradient(x);
    CHECK((ga - gb).norm() <= 1e-10 * pg.grad_sup_bound());
  }
}

TEST_CASE("trig polynomial gradient matches finite differences") {
  Rng rng(2);
  TrigPolynomial tp = TrigPolynomial::random(2, 1.0, 3, rng);
  VecD x(2);
  x[0] = 0.37;
  x[1] = 0.81;
  MatD g = tp.gradient(x);
  double h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    VecD xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    VecD fd = (tp.eval(xp) - tp.eval(xm)) / (2 * h);
    for (int c = 0; c < 2; ++c)
      CHECK(g(c, j) == doctest::Approx(fd[c]).epsilon(1e-6));
  }
}

TEST_CASE("sampling a smooth field matches pointwise evaluation") {
  Rng rng(4);
  TrigPolynomial tp = TrigPolynomial::random(2, 2.0, 2, rng);
  GridSpec g = grid2(16, 2.0);
  VectorField u = tp.sample(g);
  for (std::int64_t j = 0; j < u.num_nodes(); j += 7) {
    VecD diff = u.at(j) - tp.eval(g.position(j));
    CHECK(diff.norm() <= 1e-13);
  }
}

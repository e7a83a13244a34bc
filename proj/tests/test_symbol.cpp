#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nlwave/rng.hpp"
#include "nlwave/symbol.hpp"

using namespace nlwave;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SingularKernel fractional(int d, double s) {
  SingularKernel k;
  k.dim = d;
  k.s = s;
  k.m = DirectionWeight::constant(1.0);
  k.cone = ConeSpec::Full(d);
  k.truncation = kInf;
  return k;
}

VecD vec2(double x, double y) {
  VecD v(2);
  v[0] = x;
  v[1] = y;
  return v;
}

// Regression constants for the fractional Lame symbol, computed with an
// independent high-precision oracle (Beta-function closed forms checked
// against brute quadrature) before the build.
struct LameOracle {
  int d;
  double s, l1, l2;
};
const LameOracle kLameOracle[] = {
    {2, 0.25, 4.8052675029780151, 2.4026337514890075},
    {2, 0.5, 2.0943951023931955, 2.0943951023931955},
    {2, 0.75, 1.6692123436948412, 2.5038185155422618},
    {3, 0.25, 5.9998514078942551, 2.9999257039471276},
    {3, 0.5, 2.4674011002723397, 2.4674011002723397},
    {3, 0.75, 1.866620438011546, 2.7999306570173191},
};

}  // namespace

TEST_CASE("symbol vanishes at xi = 0") {
  auto k = KernelSpec::singular(fractional(2, 0.5));
  MatrixSymbol sym = symbol_quadrature(k, Compensator{0.5}, VecD::Zero(2));
  CHECK(sym.m.norm() == 0.0);
}

TEST_CASE("lame constants match the frozen oracle") {
  for (const auto& row : kLameOracle) {
    LameConstants c = compute_lame_constants(row.d, row.s);
    CAPTURE(row.d);
    CAPTURE(row.s);
    CHECK(c.l1 == doctest::Approx(row.l1).epsilon(row.d == 2 ? 1e-9 : 1e-6));
    CHECK(c.l2 == doctest::Approx(row.l2).epsilon(row.d == 2 ? 1e-9 : 1e-6));
    CHECK(c.l1 > 0);
    CHECK(c.l2 > 0);
  }
}

TEST_CASE("quadrature symbol matches the analytic fractional Lame symbol") {
  Rng rng(21);
  for (double s : {0.25, 0.5, 0.75}) {
    LameConstants c = compute_lame_constants(2, s);
    auto dec = SingularDecomposition::from(fractional(2, s));
    Compensator chi{s};
    for (int trial = 0; trial < 6; ++trial) {
      VecD xi = vec2(rng.normal(), rng.normal());
      xi *= std::exp(2.0 * (rng.uniform() - 0.5));
      MatrixSymbol q = symbol_quadrature(dec, chi, xi);
      MatrixSymbol a = analytic_fraclame_symbol(c, xi);
      CHECK((q.m - a.m).norm() / a.m.norm() <= 1e-6);
      CHECK(q.m.imag().norm() <= 1e-10 * q.m.norm());
    }
  }
}

TEST_CASE("analytic symbol: homogeneity and eigenstructure") {
  LameConstants c = compute_lame_constants(2, 0.5);
  VecD xi = vec2(0.7, -1.9);
  MatrixSymbol m1 = analytic_fraclame_symbol(c, xi);
  for (double mu : {0.5, 2.0, 4.0}) {
    MatrixSymbol m2 = analytic_fraclame_symbol(c, mu * xi);
    CHECK((m2.m - std::pow(mu, 2 * c.s) * m1.m).norm() <=
          1e-10 * m2.m.norm());
  }
  // eigenvalues: (2pi|xi|)^{2s} l1 across, (2pi|xi|)^{2s}(l1+l2) along xi
  MatD M = m1.m.real();
  VecD xihat = xi / xi.norm();
  double scale = std::pow(kTwoPi * xi.norm(), 2 * c.s);
  VecD along = M * xihat;
  CHECK((along - scale * (c.l1 + c.l2) * xihat).norm() <= 1e-10 * scale);
  VecD perp = vec2(-xihat[1], xihat[0]);
  VecD across = M * perp;
  CHECK((across - scale * c.l1 * perp).norm() <= 1e-10 * scale);
  CHECK(analytic_fraclame_symbol(c, VecD::Zero(2)).m.norm() == 0.0);
}

TEST_CASE("quadrature path homogeneity") {
  auto dec = SingularDecomposition::from(fractional(2, 0.3));
  Compensator chi{0.3};
  VecD xi = vec2(1.3, 0.4);
  MatrixSymbol base = symbol_quadrature(dec, chi, xi);
  for (double mu : {0.5, 2.0, 4.0}) {
    MatrixSymbol scaled = symbol_quadrature(dec, chi, mu * xi);
    CHECK((scaled.m - std::pow(mu, 0.6) * base.m).norm() <=
          1e-3 * scaled.m.norm());
  }
}

TEST_CASE("entrywise symmetry and non-even kernels") {
  SingularKernel k = fractional(2, 0.25);
  DirectionWeight w;
  w.c0 = 1.0;
  w.c1 = 0.5;
  w.axis = vec2(1, 0);
  k.m = w;
  auto dec = SingularDecomposition::from(k);
  VecD xi = vec2(2.0, 1.0);
  MatrixSymbol sym = symbol_quadrature(dec, Compensator{0.25}, xi);
  CHECK((sym.m - sym.m.transpose()).norm() <= 1e-13 * sym.m.norm());
  CHECK(sym.structure == SymbolStructure::ComplexSymmetric);
  CHECK(sym.m.imag().norm() > 1e-4 * sym.m.norm());  // genuinely complex
  // real part is the even-part symbol
  MatrixSymbol evenp = even_part_symbol(KernelSpec::singular(k), xi);
  CHECK((sym.m.real() - evenp.m.real()).norm() <= 1e-8 * evenp.m.norm());
}

TEST_CASE("even part symbol is real symmetric PSD") {
  SingularKernel k = fractional(2, 0.6);
  k.cone = ConeSpec::CapUnion(2, {{vec2(1, 0), kPi / 3}});
  k.truncation = 2.0;
  MatrixSymbol w = even_part_symbol(KernelSpec::singular(k), vec2(1.2, -0.3));
  CHECK(w.m.imag().norm() == 0.0);
  MatD re = w.m.real();
  Eigen::SelfAdjointEigenSolver<MatD> es(re);
  CHECK(es.eigenvalues()(0) >= -1e-12 * re.norm());
  // zero frequency
  CHECK(even_part_symbol(KernelSpec::singular(k), VecD::Zero(2)).m.norm() ==
        0.0);
}

TEST_CASE("s=1/2 cancellation gate") {
  SingularKernel bad = fractional(2, 0.5);
  DirectionWeight w;
  w.c0 = 1.0;
  w.c1 = 0.5;
  w.axis = vec2(1, 0);
  bad.m = w;
  CHECK_THROWS_AS(SingularDecomposition::from(bad), config_error);
  // even direction factor passes the gate
  CHECK_NOTHROW(SingularDecomposition::from(fractional(2, 0.5)));
}

TEST_CASE("psi_min: full cone ties the analytic constant, caps are smaller") {
  for (double s : {0.25, 0.5}) {
    LameConstants c = compute_lame_constants(2, s);
    PsiMinResult full = psi_min(ConeSpec::Full(2), s);
    // min over (eta, v) is (2 pi)^{2s} l1, attained at v orthogonal to eta
    CHECK(full.value ==
          doctest::Approx(std::pow(kTwoPi, 2 * s) * c.l1).epsilon(1e-6));
    CHECK(std::abs(full.v.dot(full.eta)) <= 1e-4);
    CHECK(full.value > 0);

    PsiMinResult cap =
        psi_min(ConeSpec::CapUnion(2, {{vec2(1, 0), kPi / 4}}), s);
    CHECK(cap.value > 0);
    CHECK(cap.value < full.value);
    PsiMinResult narrow =
        psi_min(ConeSpec::CapUnion(2, {{vec2(1, 0), kPi / 12}}), s);
    CHECK(narrow.value > 0);
    CHECK(narrow.value < cap.value);
  }
}

TEST_CASE("coercivity: min eigenvalue dominated by alpha1 psi_min |xi|^{2s}") {
  const double s = 0.35;
  SingularKernel k = fractional(2, s);
  DirectionWeight w;
  w.c0 = 1.5;
  w.c2 = 1.0;  // m in [1.5, 2.5], alpha1 = 1.5
  w.axis = vec2(0, 1);
  k.m = w;
  k.cone = ConeSpec::CapUnion(2, {{vec2(1, 0.2) / vec2(1, 0.2).norm(), kPi / 4}});
  PsiMinResult psi = psi_min(k.cone, s);
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    VecD xi = vec2(rng.normal(), rng.normal());
    xi *= std::exp(1.5 * (rng.uniform() - 0.5));
    MatrixSymbol w2 = even_part_symbol(KernelSpec::singular(k), xi);
    Eigen::SelfAdjointEigenSolver<MatD> es(w2.m.real());
    double bound = k.alpha1() * psi.value * std::pow(xi.norm(), 2 * s);
    CHECK(es.eigenvalues()(0) >= bound * (1 - 1e-6));
  }
}

TEST_CASE("upper bound check") {
  // pure fractional: ratio is constant in |xi| to 1e-6
  HomotopyKernel frac{fractional(2, 0.25), 1.0};
  auto rep = symbol_upper_bound_check(frac, {1.0}, -4, 6);
  CHECK(rep.pass);
  double lo = kInf, hi = 0;
  for (double v : rep.octave_sup) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK((hi - lo) / hi <= 1e-6);

  // t = 0 endpoint equals the alpha1-scaled fractional ratios
  SingularKernel base = fractional(2, 0.25);
  DirectionWeight w;
  w.c0 = 2.0;
  w.c2 = 0.5;
  w.axis = vec2(1, 0);
  base.m = w;
  base.cone = ConeSpec::CapUnion(2, {{vec2(1, 0), kPi / 3}});
  base.truncation = 1.5;
  HomotopyKernel h{base, 0.0};
  auto rep0 = symbol_upper_bound_check(h, {0.0}, -2, 4);
  auto repf = symbol_upper_bound_check(frac, {1.0}, -2, 4);
  CHECK(rep0.sup_ratio ==
        doctest::Approx(base.alpha1() * repf.sup_ratio).epsilon(1e-6));

  // generic truncated anisotropic kernel: finite, octave-stable, bounded by
  // a constant times alpha2
  auto repg = symbol_upper_bound_check(h, {0.0, 0.5, 1.0}, -4, 6);
  CHECK(repg.pass);
  CHECK(repg.sup_ratio <= 20.0 * base.alpha2());
}

TEST_CASE("radial symbol eigenvalues") {
  IntegrableKernel ball;
  ball.dim = 2;
  ball.family = BallKernel{0.35, 1.7};
  QuadratureOptions opts;
  Rng rng(31);
  for (int i = 0; i < 5; ++i) {
    VecD xi = vec2(rng.normal(), rng.normal());
    xi *= 2.0 * rng.uniform() + 0.2;
    auto [l1, l2] = radial_symbol_eigenvalues(ball, xi);
    CHECK(l1 >= 0);
    CHECK(l2 >= 0);
    CHECK(l1 <= 2 * ball.l1_mass());
    CHECK(l2 <= 2 * ball.l1_mass());
    // reconstruction R^T diag R against the generic quadrature route
    VecD xihat = xi / xi.norm();
    MatD P = xihat * xihat.transpose();
    MatD recon = l1 * P + l2 * (MatD::Identity(2, 2) - P);
    MatrixSymbol q = symbol_quadrature(KernelSpec::integrable(ball),
                                       Compensator{0.25}, xi);
    CHECK((recon - q.m.real()).norm() <= 1e-4 * recon.norm() + 1e-12);
    CHECK(q.m.imag().norm() <= 1e-10 * q.m.norm());
  }
  // xi -> 0: eigenvalues vanish
  auto [z1, z2] = radial_symbol_eigenvalues(ball, vec2(1e-8, 0));
  CHECK(std::abs(z1) <= 1e-10);
  CHECK(std::abs(z2) <= 1e-10);
  // non-radial kernel rejected
  IntegrableKernel off;
  off.dim = 2;
  off.family = OffsetGaussianKernel{0.1, vec2(0.05, 0), 1.0};
  CHECK_THROWS_AS(radial_symbol_eigenvalues(off, vec2(1, 0)),
                  std::invalid_argument);
}

TEST_CASE("symbol table: conjugate symmetry and csv export") {
  GridSpec g{2, 16, 1.0};
  SingularKernel k = fractional(2, 0.25);
  DirectionWeight w;
  w.c0 = 1.0;
  w.c1 = 0.3;
  w.axis = vec2(0.6, 0.8);
  k.m = w;
  SymbolTable t = SymbolTable::build(KernelSpec::singular(k), g);
  CHECK_FALSE(t.real_symmetric());
  for (std::int64_t m = 0; m < g.num_nodes(); ++m) {
    std::int64_t cm = g.conjugate_mode(m);
    CHECK((t.at(m) - t.at(cm).conjugate()).norm() == 0.0);
  }
  CHECK(t.at(0).norm() == 0.0);
  CHECK(t.max_est_rel_error() <= 1e-4);

  std::string path =
      (std::filesystem::temp_directory_path() / "nlwave_table.csv").string();
  t.write_csv(path);
  std::ifstream is(path);
  int lines = 0;
  std::string line;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 1 + g.num_nodes());
  std::filesystem::remove(path);
}

TEST_CASE("symbol table is thread-count independent") {
  GridSpec g{2, 8, 1.0};
  auto k = KernelSpec::singular(fractional(2, 0.5));
  SymbolTable t1 = SymbolTable::build(k, g, {}, 1);
  SymbolTable t2 = SymbolTable::build(k, g, {}, 3);
  for (std::int64_t m = 0; m < g.num_nodes(); ++m)
    CHECK((t1.at(m) - t2.at(m)).norm() == 0.0);
}

TEST_CASE("resolvent table") {
  GridSpec g{2, 16, 1.0};
  auto k = KernelSpec::singular(fractional(2, 0.5));
  SymbolTable t = SymbolTable::build(k, g);
  const double lambda = 0.7;
  ResolventTable inv = ResolventTable::build(t, lambda);
  CHECK(inv.max_product_residual() <= 1e-12);
  CHECK_FALSE(inv.zero_mode_excluded());
  const CMatD eye = CMatD::Identity(2, 2);
  for (std::int64_t m = 0; m < g.num_nodes(); m += 5) {
    CMatD A = t.at(m) + lambda * eye;
    CHECK((inv.at(m) * A - eye).norm() <= 1e-12);
    // PSD symbol: operator norm of the inverse is at most 1/lambda
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(inv.at(m)));
    CHECK(svd.singularValues()(0) <= 1.0 / lambda + 1e-12);
  }
  // lambda = 0 excludes the zero mode, other modes stay solvable
  ResolventTable inv0 = ResolventTable::build(t, 0.0);
  CHECK(inv0.zero_mode_excluded());
  CHECK(inv0.at(0).norm() == 0.0);
  CHECK(inv0.max_product_residual() <= 1e-12);

  // radial integrable kernel: inverse equals R^T diag(1/(l_i + lambda)) R
  IntegrableKernel ball;
  ball.dim = 2;
  ball.family = BallKernel{0.3, 1.0};
  SymbolTable tb = SymbolTable::build(KernelSpec::integrable(ball), g);
  ResolventTable invb = ResolventTable::build(tb, 0.5);
  for (std::int64_t m : {std::int64_t(1), std::int64_t(33)}) {
    VecD xi = g.frequency(m);
    auto [l1, l2] = radial_symbol_eigenvalues(ball, xi);
    VecD xihat = xi / xi.norm();
    MatD P = xihat * xihat.transpose();
    MatD expect = P / (l1 + 0.5) + (MatD::Identity(2, 2) - P) / (l2 + 0.5);
    CHECK((invb.at(m).real() - expect).norm() <= 2e-4 * expect.norm());
  }
}

#include "nlwave/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nlwave/artifacts.hpp"
#include "nlwave/rng.hpp"
#include "nlwave/solver.hpp"
#include "nlwave/wave.hpp"

namespace nlwave {

namespace {

VectorField random_field(const GridSpec& grid, Rng& rng, bool zero_mean) {
  VectorField f(grid);
  for (int c = 0; c < grid.dim; ++c) {
    double mean = 0;
    for (std::int64_t j = 0; j < f.num_nodes(); ++j) {
      f(c, j) = rng.normal();
      mean += f(c, j);
    }
    if (zero_mean) {
      mean /= static_cast<double>(f.num_nodes());
      for (std::int64_t j = 0; j < f.num_nodes(); ++j) f(c, j) -= mean;
    }
  }
  return f;
}

VectorField field_from_source(const RunConfig& cfg, const std::string& source,
                              Rng& rng) {
  const GridSpec& g = cfg.grid;
  if (source == "random") return random_field(g, rng, cfg.f_zero_mean);
  if (source == "zero") return VectorField(g);
  if (source == "mode") {
    VectorField f(g);
    for (std::int64_t j = 0; j < f.num_nodes(); ++j) {
      VecD x = g.position(j);
      double phase = 0;
      for (int a = 0; a < g.dim; ++a)
        phase += kTwoPi * cfg.f_mode[a] * x[a] / g.length;
      f.set(j, std::cos(phase) * cfg.f_amp);
    }
    return f;
  }
  if (source == "gaussian") {
    PeriodizedGaussian pg(g.dim, g.length, cfg.f_center, cfg.f_sigma, cfg.f_amp);
    return pg.sample(g);
  }
  if (source == "file") {
    if (cfg.f_file.empty())
      throw config_error("config: solve.f.file is required for f = file");
    return read_field(cfg.f_file);
  }
  throw config_error("config: unknown field source " + source);
}

struct SuiteReport {
  std::vector<std::tuple<std::string, bool, std::string>> checks;
  bool all_pass = true;

  void add(const std::string& name, bool pass, const std::string& detail) {
    checks.emplace_back(name, pass, detail);
    all_pass = all_pass && pass;
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
  }

  void write(const std::string& path) const {
    std::ofstream os(path);
    for (const auto& [name, pass, detail] : checks)
      os << name << " = " << (pass ? "pass" : "fail") << "  # " << detail
         << "\n";
    os << "all = " << (all_pass ? "pass" : "fail") << "\n";
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int run_symbol(const RunConfig& cfg) {
  ArtifactWriter out(cfg.out_dir);
  SymbolTable table = SymbolTable::build(cfg.kernel, cfg.grid, {}, cfg.threads);
  table.write_csv(out.path("symbol_table.csv"));
  out.record("symbol_table.csv");
  out.write_manifest();
  std::printf("symbol table: %lld modes, max quadrature error %.3g\n",
              static_cast<long long>(cfg.grid.num_nodes()),
              table.max_est_rel_error());
  return 0;
}

int run_validate(const RunConfig& cfg) {
  ArtifactWriter out(cfg.out_dir);
  SuiteReport rep;
  Rng rng(cfg.seed);
  const GridSpec& g = cfg.grid;
  const int d = g.dim;

  // kernel pointwise bounds
  if (cfg.kernel.is_singular()) {
    const SingularKernel& sk = cfg.kernel.as_singular();
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
      VecD y(d);
      for (int a = 0; a < d; ++a) y[a] = rng.normal();
      y *= std::exp(3.0 * (rng.uniform() - 0.5)) / y.norm();
      if (y.norm() > sk.truncation || !sk.cone.contains(y)) continue;
      double v = sk.eval(y);
      double ref = std::pow(y.norm(), -d - 2.0 * sk.s);
      worst = std::max(worst, std::max(sk.alpha1() * ref - v,
                                       v - sk.alpha2() * ref));
    }
    rep.add("kernel_bounds", worst <= 1e-10, "max bound violation " + fmt(worst));
    auto canc = check_cancellation(sk, {0.5, 1.0, 1.7, 2.3, 4.0});
    bool expect = sk.is_even();
    rep.add("cancellation",
            canc.pass == expect || canc.pass,
            "max normalized moment " + fmt(canc.max_normalized_moment));
  } else {
    rep.add("kernel_mass", cfg.kernel.as_integrable().l1_mass() > 0,
            "L1 mass " + fmt(cfg.kernel.as_integrable().l1_mass()));
  }

  OperatorHandle op = OperatorHandle::create(cfg.kernel, cfg.lambda, g, {},
                                             cfg.threads);

  // symbol structure at sampled frequencies
  {
    double worst_sym = 0, worst_imag = 0;
    for (int trial = 0; trial < 8; ++trial) {
      std::int64_t m = 1 + static_cast<std::int64_t>(
                               rng.uniform() * (g.num_nodes() - 1));
      CMatD M = op.table().at(m);
      worst_sym = std::max(worst_sym,
                           (M - M.transpose()).norm() / std::max(M.norm(), 1e-300));
      if (cfg.kernel.is_even())
        worst_imag = std::max(worst_imag,
                              M.imag().norm() / std::max(M.norm(), 1e-300));
    }
    rep.add("symbol_symmetry", worst_sym <= 1e-12,
            "max asymmetry " + fmt(worst_sym));
    if (cfg.kernel.is_even())
      rep.add("symbol_real", worst_imag <= 1e-8,
              "max imaginary fraction " + fmt(worst_imag));
  }

  const bool pure_fractional =
      cfg.kernel.is_singular() && cfg.kernel.as_singular().cone.is_full() &&
      cfg.kernel.as_singular().m.c1 == 0 && cfg.kernel.as_singular().m.c2 == 0 &&
      std::isinf(cfg.kernel.as_singular().truncation);

  if (pure_fractional) {
    const double s = cfg.kernel.as_singular().s;
    Compensator chi{s};
    auto dec = SingularDecomposition::from(cfg.kernel.as_singular());
    VecD xi(d);
    xi.setZero();
    xi[0] = 3.0 / g.length;
    xi[1] = 1.0 / g.length;
    CMatD m1 = symbol_quadrature(dec, chi, xi).m;
    CMatD m2 = symbol_quadrature(dec, chi, 2.0 * xi).m;
    double rel = (m2 - std::pow(2.0, 2.0 * s) * m1).norm() / m2.norm();
    rep.add("homogeneity", rel <= 1e-3, "relative defect " + fmt(rel));
  }

  if (cfg.kernel.is_singular() && cfg.kernel.is_even() &&
      std::isinf(cfg.kernel.as_singular().truncation)) {
    const SingularKernel& sk = cfg.kernel.as_singular();
    PsiMinResult psi = psi_min(sk.cone, sk.s);
    double worst_slack = 0;
    bool ok = true;
    for (int trial = 0; trial < 12; ++trial) {
      std::int64_t m = 1 + static_cast<std::int64_t>(
                               rng.uniform() * (g.num_nodes() - 1));
      VecD xi = g.frequency(m);
      if (xi.norm() == 0) continue;
      MatD M = op.table().at(m).real();
      Eigen::SelfAdjointEigenSolver<MatD> es(M);
      double bound = sk.alpha1() * psi.value * std::pow(xi.norm(), 2.0 * sk.s);
      double slack = es.eigenvalues()(0) - bound;
      worst_slack = std::min(worst_slack, slack / std::max(bound, 1e-300));
      ok = ok && slack >= -1e-6 * bound;
    }
    rep.add("coercivity", ok, "worst relative slack " + fmt(worst_slack));
  }

  if (cfg.kernel.is_singular()) {
    HomotopyKernel h{cfg.kernel.as_singular(), 1.0};
    bool checkable = true;
    try {
      auto ub = symbol_upper_bound_check(h, {0.0, 0.5, 1.0});
      rep.add("upper_bound", ub.pass,
              "sup ratio " + fmt(ub.sup_ratio) + ", top octave variation " +
                  fmt(ub.top_octave_variation));
    } catch (const config_error&) {
      checkable = false;
    }
    if (!checkable)
      rep.add("upper_bound", false, "kernel rejected by cancellation gate");
  }

  // resolvent identity
  {
    double lambda = cfg.lambda > 0 ? cfg.lambda : 1.0;
    ResolventTable inv = ResolventTable::build(op.table(), lambda);
    rep.add("resolvent_identity", inv.max_product_residual() <= 1e-12,
            "max product residual " + fmt(inv.max_product_residual()));
  }

  // steady solve + estimates
  {
    OperatorHandle ops = cfg.lambda > 0
                             ? op
                             : OperatorHandle::create(cfg.kernel, 1.0, g, {},
                                                      cfg.threads);
    VectorField f = random_field(g, rng, false);
    VectorField u = solve_steady(ops, f);
    VectorField r = apply_L_spectral(ops, u);
    VectorField tmp = u;
    tmp *= ops.lambda();
    r += tmp;
    r -= f;
    double res = l2_norm(r) / l2_norm(f);
    rep.add("steady_residual", res <= 1e-10, "relative residual " + fmt(res));
    EstimateReport est = verify_apriori(
        ops, u, f,
        cfg.kernel.is_integrable() ? TheoremKind::Integrable
                                   : TheoremKind::Nonintegrable);
    write_estimate_report(out.path("estimate_report.txt"), est);
    out.record("estimate_report.txt");
    if (cfg.kernel.is_integrable())
      rep.add("resolvent_estimate_c1", est.pass, "slack " + fmt(est.slack));
    else
      rep.add("apriori_report", est.pass,
              "min admissible C " + fmt(est.min_admissible_c));
  }

  if (cfg.kernel.is_even()) {
    double worst = 0;
    for (int trial = 0; trial < 5; ++trial) {
      VectorField u = random_field(g, rng, false);
      double e = bilinear_energy(op, u);
      double n = l2_norm(u);
      worst = std::min(worst, e / (n * n));
    }
    rep.add("energy_nonnegative", worst >= -1e-10,
            "min <Lu,u>/||u||^2 " + fmt(worst));
  }

  if (cfg.kernel.is_even()) {
    GridSpec gw = g;
    gw.n = std::min(g.n, 32);
    OperatorHandle opw = OperatorHandle::create(cfg.kernel, cfg.lambda, gw, {},
                                                cfg.threads);
    VecD center = VecD::Constant(d, 0.5 * gw.length);
    PeriodizedGaussian bump(d, gw.length, center, 0.08 * gw.length,
                            VecD::Ones(d));
    VectorField u0 = bump.sample(gw);
    VectorField v0(gw);
    auto traj = propagate(opw, u0, v0, Forcing::zero(), 1.0,
                          StepperKind::Exact, 0.0, 8);
    EnergyLedger ledger = energy_ledger(traj, opw, Forcing::zero());
    ledger.write_csv(out.path("ledger.csv"));
    out.record("ledger.csv");
    double drift = ledger.max_relative_drift();
    rep.add("conservation", drift <= 1e-8, "relative drift " + fmt(drift));
  }

  {
    double s = cfg.kernel.is_singular() ? cfg.kernel.as_singular().s : 0.5;
    LameConstants lc = compute_lame_constants(d, s);
    double lambda = cfg.lambda > 0 ? cfg.lambda : 1.0;
    auto r1 = marcinkiewicz_check_m(1, lc, lambda);
    auto r2 = marcinkiewicz_check_m(2, lc, lambda);
    bool range_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
      VecD xi(d);
      for (int a = 0; a < d; ++a) xi[a] = 3.0 * rng.normal();
      auto [m1v, m2v] = multiplier_m1_m2(lc, lambda, xi);
      range_ok = range_ok && m1v > 0 && m2v >= 0 && m2v < 1;
    }
    rep.add("multiplier", r1.pass && r2.pass && range_ok,
            "m1 sup " + fmt(r1.rows[0].weighted_sup) + ", m2 sup " +
                fmt(r2.rows[0].weighted_sup));
  }

  if (cfg.kernel.is_integrable()) {
    double bound = 2.0 * cfg.kernel.as_integrable().l1_mass();
    bool ok = true;
    double worst = 0;
    for (int trial = 0; trial < 5; ++trial) {
      VectorField u = random_field(g, rng, false);
      VectorField Lu = apply_L_spectral(op, u);
      for (double p : {1.0, 2.0, 4.0,
                       std::numeric_limits<double>::infinity()}) {
        double ratio = lp_norm(Lu, p) / lp_norm(u, p);
        worst = std::max(worst, ratio);
        ok = ok && ratio <= bound * (1 + 1e-10);
      }
    }
    rep.add("integrable_bound", ok,
            "max ||Lu||_p/||u||_p " + fmt(worst) + " vs bound " + fmt(bound));
  }

  rep.write(out.path("validate_report.txt"));
  out.record("validate_report.txt");
  out.write_manifest();
  if (!rep.all_pass) {
    std::fprintf(stderr, "validate: one or more suites failed\n");
    return 3;
  }
  return 0;
}

int run_solve_steady(const RunConfig& cfg) {
  ArtifactWriter out(cfg.out_dir);
  Rng rng(cfg.seed);
  OperatorHandle op =
      OperatorHandle::create(cfg.kernel, cfg.lambda, cfg.grid, {}, cfg.threads);
  VectorField f = field_from_source(cfg, cfg.f_source, rng);
  VectorField u = solve_steady(op, f);
  write_field(out.path("f.field"), f);
  out.record("f.field");
  write_field(out.path("u.field"), u);
  out.record("u.field");
  EstimateReport est = verify_apriori(
      op, u, f,
      cfg.kernel.is_integrable() ? TheoremKind::Integrable
                                 : TheoremKind::Nonintegrable);
  write_estimate_report(out.path("estimate_report.txt"), est);
  out.record("estimate_report.txt");
  write_estimate_csv(out.path("estimates.csv"), {est});
  out.record("estimates.csv");
  out.write_manifest();
  std::printf("solve-steady: residual-checked solution written; ||u|| = %.6g\n",
              est.norm_u_l2);
  return 0;
}

int run_solve_wave(const RunConfig& cfg) {
  ArtifactWriter out(cfg.out_dir);
  Rng rng(cfg.seed);
  OperatorHandle op =
      OperatorHandle::create(cfg.kernel, cfg.lambda, cfg.grid, {}, cfg.threads);
  const GridSpec& g = cfg.grid;
  VectorField u0(g), v0(g);
  if (cfg.u0_source == "gaussian") {
    PeriodizedGaussian bump(g.dim, g.length, cfg.u0_center, cfg.u0_sigma,
                            cfg.u0_amp);
    u0 = bump.sample(g);
  } else {
    u0 = field_from_source(cfg, cfg.u0_source, rng);
  }
  v0 = field_from_source(cfg, cfg.v0_source, rng);
  Forcing forcing = Forcing::zero();
  if (cfg.wave_forcing == "constant")
    forcing = Forcing::constant(field_from_source(cfg, cfg.f_source, rng));
  StepperKind stepper =
      cfg.stepper == "exact" ? StepperKind::Exact : StepperKind::Leapfrog;
  auto traj = propagate(op, u0, v0, forcing, cfg.wave_T, stepper, cfg.dt,
                        cfg.outputs);
  for (size_t i = 0; i < traj.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "u_%04zu.field", i);
    write_field(out.path(name), traj[i].u);
    out.record(name);
    std::snprintf(name, sizeof name, "v_%04zu.field", i);
    write_field(out.path(name), traj[i].v);
    out.record(name);
  }
  EnergyLedger ledger = energy_ledger(traj, op, forcing);
  ledger.write_csv(out.path("ledger.csv"));
  out.record("ledger.csv");
  out.write_manifest();
  std::printf("solve-wave: %zu states written, relative energy drift %.3g\n",
              traj.size(), ledger.max_relative_drift());
  return 0;
}

}  // namespace

int run_command(const RunConfig& cfg) {
  if (cfg.command == "symbol") return run_symbol(cfg);
  if (cfg.command == "validate") return run_validate(cfg);
  if (cfg.command == "solve-steady") return run_solve_steady(cfg);
  if (cfg.command == "solve-wave") return run_solve_wave(cfg);
  throw config_error("unknown command: " + cfg.command +
                     " (field: command; expected symbol, validate, "
                     "solve-steady or solve-wave)");
}

}  // namespace nlwave

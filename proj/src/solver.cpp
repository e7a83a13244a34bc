#include "nlwave/solver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace nlwave {

namespace {

const char* kind_name(TheoremKind k) {
  switch (k) {
    case TheoremKind::Nonintegrable: return "nonintegrable";
    case TheoremKind::Integrable: return "integrable";
    case TheoremKind::FracLame: return "fraclame";
  }
  return "?";
}

}  // namespace

double l2_inner(const VectorField& a, const VectorField& b) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("l2_inner: grid mismatch");
  double acc = 0;
  const auto& ra = a.raw();
  const auto& rb = b.raw();
  for (size_t i = 0; i < ra.size(); ++i) acc += ra[i] * rb[i];
  return acc * std::pow(a.grid().spacing(), a.grid().dim);
}

double energy_inner(const OperatorHandle& op, const VectorField& a,
                    const VectorField& b) {
  if (!(a.grid() == op.grid()) || !(b.grid() == op.grid()))
    throw std::invalid_argument("energy_inner: grid mismatch");
  SpectralField ah = forward_transform(a), bh = forward_transform(b);
  const double lambda = op.lambda();
  const int d = op.grid().dim;
  double acc = 0;
  for (std::int64_t m = 0; m < ah.num_modes(); ++m) {
    CMatD A = op.table().at(m) + lambda * CMatD::Identity(d, d);
    acc += (bh.at(m).adjoint() * A * ah.at(m))(0).real();
  }
  return acc / std::pow(op.grid().length, d);
}

VectorField solve_steady(const OperatorHandle& op, const VectorField& f) {
  if (!(f.grid() == op.grid()))
    throw std::invalid_argument("solve_steady: grid mismatch");
  SpectralField fhat = forward_transform(f);
  const double lambda = op.lambda();
  if (lambda == 0.0) {
    double fmean = fhat.at(0).norm();
    double fscale = 0;
    for (std::int64_t m = 0; m < fhat.num_modes(); ++m)
      fscale = std::max(fscale, fhat.at(m).norm());
    if (fmean > 1e-13 * std::max(fscale, 1e-300))
      throw solver_error("solve_steady: mean mode not solvable at lambda = 0");
  }
  ResolventTable inv = ResolventTable::build(op.table(), lambda);
  SpectralField uhat(op.grid());
  for (std::int64_t m = 0; m < fhat.num_modes(); ++m)
    uhat.set(m, inv.at(m) * fhat.at(m));
  if (inv.zero_mode_excluded()) uhat.set(0, CVecD::Zero(op.grid().dim));
  VectorField u = inverse_transform(uhat);

  // residual audit
  VectorField r = apply_L_spectral(op, u);
  VectorField lu = u;
  lu *= lambda;
  r += lu;
  r -= f;
  double fn = l2_norm(f);
  if (fn > 0 && l2_norm(r) / fn > 1e-10)
    throw numeric_error("solve_steady: residual exceeded 1e-10");
  return u;
}

EstimateReport verify_apriori(const OperatorHandle& op, const VectorField& u,
                              const VectorField& f, TheoremKind kind,
                              double p) {
  // residual precondition
  VectorField r = apply_L_spectral(op, u);
  VectorField lu = u;
  lu *= op.lambda();
  r += lu;
  r -= f;
  double fn = l2_norm(f);
  if (fn > 0 && l2_norm(r) / fn > 1e-8)
    throw std::invalid_argument(
        "verify_apriori: (u, f) do not solve the equation to 1e-8");

  EstimateReport rep;
  rep.kind = kind;
  rep.lambda = op.lambda();
  rep.p = p;
  rep.norm_f = l2_norm(f);
  rep.norm_u_l2 = l2_norm(u);

  const double eps = 1e-300;
  switch (kind) {
    case TheoremKind::Nonintegrable: {
      if (!op.kernel().is_singular())
        throw std::invalid_argument("verify_apriori: kernel is not Class B");
      const SingularKernel& sk = op.kernel().as_singular();
      rep.s = sk.s;
      SobolevNorms n = sobolev_norms(u, sk.s);
      rep.norm_ds = n.ds;
      rep.norm_d2s = n.d2s;
      N2Result n2 = n2_constant(sk);
      rep.n2 = n2.value;
      rep.n2_infinite_radius = n2.infinite_radius;
      // minimal N1 with ||D2s u|| + sqrt(l)||Ds u|| + l||u|| <= N1(||f|| + N2||u||)
      double lhs_n1 = n.d2s + std::sqrt(rep.lambda) * n.ds +
                      rep.lambda * rep.norm_u_l2;
      rep.n1_fitted = lhs_n1 / (rep.norm_f + rep.n2 * rep.norm_u_l2 + eps);
      rep.lambda0 = rep.n1_fitted * rep.n2;
      rep.lhs = n.d2s + std::sqrt(rep.lambda) * n.ds +
                (rep.lambda - rep.lambda0) * rep.norm_u_l2;
      rep.min_admissible_c = rep.lhs / (rep.norm_f + eps);
      rep.slack = rep.min_admissible_c * rep.norm_f - rep.lhs;
      rep.pass = std::isfinite(rep.min_admissible_c);
      break;
    }
    case TheoremKind::Integrable: {
      rep.lhs = rep.lambda * rep.norm_u_l2;
      rep.min_admissible_c = rep.lhs / (rep.norm_f + eps);
      rep.slack = rep.norm_f - rep.lhs;  // slack at C = 1
      rep.pass = rep.slack >= -1e-12 * std::max(rep.norm_f, 1.0);
      break;
    }
    case TheoremKind::FracLame: {
      if (!op.kernel().is_singular())
        throw std::invalid_argument("verify_apriori: kernel is not Class B");
      rep.s = op.kernel().as_singular().s;
      // grid L^p norm of the Bessel-weighted inverse transform
      SpectralField uhat = forward_transform(u);
      SpectralField weighted(op.grid());
      for (std::int64_t m = 0; m < uhat.num_modes(); ++m) {
        double w = std::pow(
            1.0 + 4.0 * kPi * kPi * op.grid().frequency(m).squaredNorm(),
            rep.s);
        weighted.set(m, w * uhat.at(m));
      }
      rep.norm_bessel_p = lp_norm(inverse_transform(weighted), p);
      double fp = lp_norm(f, p);
      rep.lhs = rep.norm_bessel_p;
      rep.min_admissible_c = rep.lhs / (fp + eps);
      rep.slack = rep.min_admissible_c * fp - rep.lhs;
      rep.pass = std::isfinite(rep.min_admissible_c);
      break;
    }
  }
  return rep;
}

void write_estimate_report(const std::string& path, const EstimateReport& rep) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_estimate_report: cannot open " + path);
  char buf[64];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << key << " = " << buf << "\n";
  };
  os << "kind = " << kind_name(rep.kind) << "\n";
  put("lambda", rep.lambda);
  put("s", rep.s);
  put("p", rep.p);
  put("n2", rep.n2);
  os << "n2_infinite_radius = " << (rep.n2_infinite_radius ? "true" : "false")
     << "\n";
  put("n1_fitted", rep.n1_fitted);
  put("lambda0", rep.lambda0);
  put("norm_u_l2", rep.norm_u_l2);
  put("norm_f", rep.norm_f);
  put("norm_ds", rep.norm_ds);
  put("norm_d2s", rep.norm_d2s);
  put("norm_bessel_p", rep.norm_bessel_p);
  put("lhs", rep.lhs);
  put("min_admissible_c", rep.min_admissible_c);
  put("slack", rep.slack);
  os << "pass = " << (rep.pass ? "true" : "false") << "\n";
}

void write_estimate_csv(const std::string& path,
                        const std::vector<EstimateReport>& reports) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_estimate_csv: cannot open " + path);
  os << "kind,lambda,s,p,n2,n1_fitted,lambda0,norm_u_l2,norm_f,norm_ds,"
        "norm_d2s,norm_bessel_p,lhs,min_admissible_c,slack,pass\n";
  char buf[64];
  for (const auto& rep : reports) {
    os << kind_name(rep.kind);
    for (double v : {rep.lambda, rep.s, rep.p, rep.n2, rep.n1_fitted,
                     rep.lambda0, rep.norm_u_l2, rep.norm_f, rep.norm_ds,
                     rep.norm_d2s, rep.norm_bessel_p, rep.lhs,
                     rep.min_admissible_c, rep.slack}) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << "," << buf;
    }
    os << "," << (rep.pass ? "true" : "false") << "\n";
  }
}

BlockSolveResult solve_resolvent_block(const OperatorHandle& op,
                                       const VectorField& g1,
                                       const VectorField& g2) {
  if (!op.kernel().is_even())
    throw std::invalid_argument("solve_resolvent_block: kernel must be even");
  if (!(g1.grid() == op.grid()) || !(g2.grid() == op.grid()))
    throw std::invalid_argument("solve_resolvent_block: grid mismatch");
  const double lambda = op.lambda();

  // L u + (lambda + 4) u = 2 g1 + g2, then v = 2u - g1
  VectorField rhs = g1;
  rhs *= 2.0;
  rhs += g2;
  SpectralField rhat = forward_transform(rhs);
  ResolventTable inv = ResolventTable::build(op.table(), lambda + 4.0);
  SpectralField uhat(op.grid());
  for (std::int64_t m = 0; m < rhat.num_modes(); ++m)
    uhat.set(m, inv.at(m) * rhat.at(m));
  BlockSolveResult res{inverse_transform(uhat), VectorField(op.grid()),
                       0, 0, 0, 0};
  res.v = res.u;
  res.v *= 2.0;
  res.v -= g1;

  double scale = std::max({l2_norm(g1), l2_norm(g2), 1e-300});
  // block residuals
  VectorField r1 = res.u;
  r1 *= 2.0;
  r1 -= res.v;
  r1 -= g1;
  res.residual1 = l2_norm(r1) / scale;
  VectorField r2 = apply_L_spectral(op, res.u);
  VectorField tmp = res.u;
  tmp *= lambda;
  r2 += tmp;
  tmp = res.v;
  tmp *= 2.0;
  r2 += tmp;
  r2 -= g2;
  res.residual2 = l2_norm(r2) / scale;

  // monotonicity identity in the energy inner product:
  // <(A_l + I)U, U>_H = ||L_l^{1/2} u||^2 + 1/2||u||^2 + 1/2||v||^2
  //                     + 1/2||u - v||^2
  // where A_l U = (-v, L_l u).
  double e_uv = energy_inner(op, res.v, res.u);  // <L_l^{1/2} v, L_l^{1/2} u>
  double l2_uv = l2_inner(res.u, res.v);
  VectorField Lu = apply_L_spectral(op, res.u);
  tmp = res.u;
  tmp *= lambda;
  Lu += tmp;  // L_lambda u
  double lhs = -e_uv - l2_uv + l2_inner(Lu, res.v)  // <A_l U, U>_H
               + energy_inner(op, res.u, res.u) + l2_inner(res.u, res.u) +
               l2_inner(res.v, res.v);  // + <U, U>_H
  VectorField umv = res.u;
  umv -= res.v;
  double rhs_id = energy_inner(op, res.u, res.u) +
                  0.5 * l2_inner(res.u, res.u) + 0.5 * l2_inner(res.v, res.v) +
                  0.5 * l2_inner(umv, umv);
  res.monotone_lhs = lhs;
  res.monotone_rhs = rhs_id;
  return res;
}

}  // namespace nlwave

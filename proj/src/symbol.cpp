#include "nlwave/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "nlwave/quadrature.hpp"

namespace nlwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Fast evaluators for the scale-free radial integrals
//   Cos:  int_0^X (1-cos w) w^{-1-2s} dw
//   Sin:  int_0^X sin(w)    w^{-1-2s} dw   (s < 1/2 only)
//   WSin: int_0^X (w-sin w) w^{-1-2s} dw
// built once per (profile, s): power series near 0, cumulative Gauss panels
// up to w = 40, closed forms with integration-by-parts tails beyond.
// ---------------------------------------------------------------------------

enum class RadialProfile { Cos, Sin, WSin };

class RadialTable {
 public:
  RadialTable(RadialProfile profile, double s) : profile_(profile), s_(s) {
    if (profile == RadialProfile::Sin && s >= 0.5)
      throw std::invalid_argument("RadialTable: Sin profile needs s < 1/2");
    series_base_ = series(kSeriesCut);
    cum_.resize(kPanels + 1, 0.0);
    for (int i = 0; i < kPanels; ++i) {
      double a = kSeriesCut + i * kPanelWidth;
      double b = a + kPanelWidth;
      cum_[i + 1] = cum_[i] + integrate_gl([&](double w) { return integrand(w); },
                                           a, b, 24);
    }
    switch (profile) {
      case RadialProfile::Cos: at_infinity_ = kc_infinity(s); break;
      case RadialProfile::Sin: at_infinity_ = ks_infinity(s); break;
      case RadialProfile::WSin:
        at_infinity_ = s > 0.5 ? kws_infinity(s) : kInf;
        break;
    }
  }

  double eval(double X) const {
    if (X <= 0.0) return 0.0;
    if (std::isinf(X)) {
      if (std::isinf(at_infinity_))
        throw std::invalid_argument("RadialTable: divergent at X = infinity");
      return at_infinity_;
    }
    if (X <= kSeriesCut) return series(X);
    if (X <= kTableEnd) {
      int j = std::min(kPanels - 1,
                       static_cast<int>((X - kSeriesCut) / kPanelWidth));
      double a = kSeriesCut + j * kPanelWidth;
      return series_base_ + cum_[j] +
             integrate_gl([&](double w) { return integrand(w); }, a, X, 16);
    }
    auto [Ic, Is] = oscillatory_tails(X, -1.0 - 2.0 * s_);
    switch (profile_) {
      case RadialProfile::Cos:
        return at_infinity_ - (std::pow(X, -2.0 * s_) / (2.0 * s_) - Ic);
      case RadialProfile::Sin:
        return at_infinity_ - Is;
      case RadialProfile::WSin: {
        if (s_ > 0.5)
          return at_infinity_ -
                 (std::pow(X, 1.0 - 2.0 * s_) / (2.0 * s_ - 1.0) - Is);
        // grow the monotone part analytically from the table end
        double lin = std::abs(1.0 - 2.0 * s_) < 1e-12
                         ? std::log(X / kTableEnd)
                         : (std::pow(X, 1.0 - 2.0 * s_) -
                            std::pow(kTableEnd, 1.0 - 2.0 * s_)) /
                               (1.0 - 2.0 * s_);
        auto tc = oscillatory_tails(kTableEnd, -1.0 - 2.0 * s_);
        return eval(kTableEnd) + lin - (tc.second - Is);
      }
    }
    return 0.0;
  }

 private:
  static constexpr double kSeriesCut = 5.0;
  static constexpr double kTableEnd = 40.0;
  static constexpr double kPanelWidth = 2.5;
  static constexpr int kPanels = 14;

  double integrand(double w) const {
    double p = std::pow(w, -1.0 - 2.0 * s_);
    switch (profile_) {
      case RadialProfile::Cos: return one_minus_cos(w) * p;
      case RadialProfile::Sin: return std::sin(w) * p;
      case RadialProfile::WSin: return w_minus_sin(w) * p;
    }
    return 0.0;
  }

  double series(double X) const {
    // term-by-term integration of the sine/cosine series
    double acc = 0.0;
    if (profile_ == RadialProfile::Cos) {
      double fact = 2.0;  // (2k)! at k=1
      double xpow = std::pow(X, 2.0 - 2.0 * s_);
      double X2 = X * X;
      double sign = 1.0;
      for (int k = 1; k < 80; ++k) {
        double term = sign * xpow / (fact * (2.0 * k - 2.0 * s_));
        acc += term;
        if (std::abs(term) < 1e-18 * std::abs(acc)) break;
        sign = -sign;
        xpow *= X2;
        fact *= (2.0 * k + 1) * (2.0 * k + 2);
      }
      return acc;
    }
    const bool wsin = profile_ == RadialProfile::WSin;
    double fact = wsin ? 6.0 : 1.0;  // (2k+1)! at the first index
    int k0 = wsin ? 1 : 0;
    double xpow = std::pow(X, 2.0 * k0 + 1.0 - 2.0 * s_);
    double X2 = X * X;
    double sign = wsin ? 1.0 : 1.0;
    for (int k = k0; k < 80; ++k) {
      double term = sign * xpow / (fact * (2.0 * k + 1.0 - 2.0 * s_));
      acc += term;
      if (std::abs(term) < 1e-18 * std::abs(acc)) break;
      sign = -sign;
      xpow *= X2;
      fact *= (2.0 * k + 2) * (2.0 * k + 3);
    }
    return acc;
  }

  RadialProfile profile_;
  double s_;
  double series_base_ = 0.0;
  double at_infinity_ = 0.0;
  std::vector<double> cum_;
};

const RadialTable& radial_table(RadialProfile profile, double s) {
  static std::map<std::pair<int, double>, RadialTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(profile), s);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, RadialTable(profile, s)).first;
  return it->second;
}

MatD outer(const VecD& nu) { return nu * nu.transpose(); }

struct AssembleResult {
  MatD re;
  MatD im;
};

// One pass over the angular rule at a fixed order. Nodes come in exact +/-
// pairs, so the even (1 - cos) part picks up m(nu)+m(-nu) and the odd part
// m(nu)-m(-nu); odd-kernel real contributions and even-kernel imaginary
// contributions cancel identically.
AssembleResult assemble_singular_at_order(const SingularDecomposition& dec,
                                          Compensator::Case chi_case,
                                          const VecD& xi, int order,
                                          bool even_only) {
  const int d = dec.dim;
  const double s = dec.s;
  AssembleResult out{MatD::Zero(d, d), MatD::Zero(d, d)};
  const double xi_norm = xi.norm();
  VecD xihat = xi / xi_norm;
  const RadialTable& tcos = radial_table(RadialProfile::Cos, s);

  for (const auto& part : dec.parts) {
    if (part.coeff == 0.0) continue;
    auto rule = cone_angular_rule(part.cone, order, &xihat);
    const bool part_even = part.m.is_even();
    for (size_t i = 0; i + 1 < rule.size(); i += 2) {
      const VecD& nu = rule[i].nu;
      const double w = rule[i].weight;
      const double a = kTwoPi * nu.dot(xi);
      if (a == 0.0) continue;
      const double absa = std::abs(a);
      const double X0 = part.r_inner > 0 ? absa * part.r_inner : 0.0;
      const double X1 = absa * part.r_outer;
      const double apow = std::pow(absa, 2.0 * s);
      const double mp = part.m(nu), mm = part.m(-nu);
      const double rc = apow * (tcos.eval(X1) - tcos.eval(X0));
      MatD P = w * part.coeff * outer(nu);
      out.re += (mp + mm) * rc * P;
      if (even_only || part_even) continue;
      double ri = 0.0;
      if (chi_case == Compensator::Case::Zero) {
        const RadialTable& tsin = radial_table(RadialProfile::Sin, s);
        ri = -std::copysign(apow, a) * (tsin.eval(X1) - tsin.eval(X0));
      } else if (chi_case == Compensator::Case::One) {
        const RadialTable& tws = radial_table(RadialProfile::WSin, s);
        ri = std::copysign(apow, a) * (tws.eval(X1) - tws.eval(X0));
      } else {
        // s = 1/2 with a non-even part is rejected at decomposition time
        // (cancellation condition), so this branch is unreachable.
        throw numeric_error("symbol quadrature: non-even kernel at s = 1/2");
      }
      out.im += (mp - mm) * ri * P;
    }
  }
  return out;
}

AssembleResult assemble_integrable_at_order(const IntegrableKernel& k,
                                            const VecD& xi, int order,
                                            bool even_only) {
  const int d = k.dim;
  AssembleResult out{MatD::Zero(d, d), MatD::Zero(d, d)};
  const double xi_norm = xi.norm();
  VecD xihat = xi / xi_norm;
  ConeSpec cone = ConeSpec::Full(d);
  if (const auto* c = std::get_if<ConeIndicatorKernel>(&k.family))
    cone = c->cone;
  const double R = k.support_radius();
  auto rule = cone_angular_rule(cone, order, &xihat);
  for (const auto& node : rule) {
    const VecD& nu = node.nu;
    const double a = kTwoPi * nu.dot(xi);
    int panels = std::max(8, static_cast<int>(std::ceil(std::abs(a) * R / kPi)));
    panels = std::min(panels, 1 << 14);
    double re = 0, im = 0;
    for (int p = 0; p < panels; ++p) {
      double lo = R * p / panels, hi = R * (p + 1) / panels;
      const GaussRule& gr = gauss_legendre(8);
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int q = 0; q < 8; ++q) {
        double tau = mid + half * gr.nodes[q];
        double wq = half * gr.weights[q];
        double rho = k.eval(tau * nu);
        if (rho == 0.0) continue;
        double base = wq * rho * std::pow(tau, d - 1);
        re += base * one_minus_cos(a * tau);
        if (!even_only) im -= base * std::sin(a * tau);
      }
    }
    MatD P = node.weight * outer(nu);
    out.re += re * P;
    out.im += im * P;
  }
  return out;
}

MatrixSymbol refine_symbol(
    const std::function<AssembleResult(int)>& at_order, const VecD& xi, int dim,
    bool even_kernel, const QuadratureOptions& opts) {
  MatrixSymbol sym;
  sym.xi = xi;
  sym.provenance = SymbolProvenance::Quadrature;
  sym.structure = even_kernel ? SymbolStructure::RealSymmetric
                              : SymbolStructure::ComplexSymmetric;
  AssembleResult prev{MatD::Zero(dim, dim), MatD::Zero(dim, dim)};
  std::vector<double> deltas;
  for (int order = opts.min_angular_order;; order *= 2) {
    AssembleResult curr = at_order(order);
    double scale = std::sqrt(curr.re.squaredNorm() + curr.im.squaredNorm());
    double delta = std::sqrt((curr.re - prev.re).squaredNorm() +
                             (curr.im - prev.im).squaredNorm());
    double rel = delta / std::max(scale, 1e-300);
    if (order > opts.min_angular_order) deltas.push_back(rel);
    bool converged = order > opts.min_angular_order &&
                     (rel <= opts.target_rel_error || scale == 0.0);
    if (converged || 2 * order > opts.max_angular_order) {
      if (!converged && !deltas.empty() && deltas.back() > opts.fail_threshold) {
        std::ostringstream os;
        os << "symbol quadrature did not converge at xi = [";
        for (int i = 0; i < dim; ++i) os << (i ? ", " : "") << xi[i];
        os << "]; refinement trace:";
        for (double dd : deltas) os << " " << dd;
        throw numeric_error(os.str());
      }
      sym.m = curr.re.cast<Complex>() +
              Complex(0, 1) * curr.im.cast<Complex>();
      sym.est_rel_error = deltas.empty() ? 0.0 : deltas.back();
      sym.angular_order = order;
      if (even_kernel) sym.m = curr.re.cast<Complex>();
      return sym;
    }
    prev = curr;
  }
}

}  // namespace

SingularDecomposition SingularDecomposition::from(const SingularKernel& k) {
  k.validate();
  SingularDecomposition dec;
  dec.dim = k.dim;
  dec.s = k.s;
  if (k.s == 0.5 && !k.is_even()) {
    auto rep = check_cancellation(k, {0.5, 1.0, 2.0}, 64);
    if (!rep.pass) {
      std::ostringstream os;
      os << "kernel rejected: cancellation condition fails at s = 1/2 "
         << "(max normalized moment " << rep.max_normalized_moment << " at ("
         << rep.worst_i << "," << rep.worst_j << "," << rep.worst_k << "))";
      throw config_error(os.str());
    }
  }
  dec.parts.push_back({1.0, k.m, k.cone, 0.0, k.truncation});
  return dec;
}

SingularDecomposition SingularDecomposition::from(const HomotopyKernel& h) {
  h.validate();
  SingularDecomposition dec;
  dec.dim = h.base.dim;
  dec.s = h.base.s;
  if (h.t > 0.0) {
    SingularDecomposition base = from(h.base);  // runs the s=1/2 check
    dec.parts.push_back({h.t, h.base.m, h.base.cone, 0.0, h.base.truncation});
  }
  if (h.t < 1.0)
    dec.parts.push_back({(1.0 - h.t) * h.base.alpha1(),
                         DirectionWeight::constant(1.0),
                         ConeSpec::Full(h.base.dim), 0.0, kInf});
  return dec;
}

SingularDecomposition SingularDecomposition::from(const ModifiedKernel& mk) {
  SingularDecomposition dec = from(mk.h);
  const SingularKernel& b = mk.h.base;
  if (mk.h.t > 0.0 && !std::isinf(b.truncation))
    dec.parts.push_back({mk.h.t * b.alpha1(), DirectionWeight::constant(1.0),
                         b.cone, b.truncation, kInf});
  return dec;
}

MatrixSymbol symbol_quadrature(const SingularDecomposition& dec,
                               const Compensator& chi, const VecD& xi,
                               const QuadratureOptions& opts) {
  if (Compensator{dec.s}.rule() != chi.rule())
    throw std::invalid_argument(
        "symbol_quadrature: compensator inconsistent with kernel order s");
  bool even = true;
  for (const auto& p : dec.parts) even = even && p.m.is_even();
  if (xi.norm() == 0.0) {
    MatrixSymbol sym;
    sym.xi = xi;
    sym.m = CMatD::Zero(dec.dim, dec.dim);
    sym.structure = even ? SymbolStructure::RealSymmetric
                         : SymbolStructure::ComplexSymmetric;
    return sym;
  }
  return refine_symbol(
      [&](int order) {
        return assemble_singular_at_order(dec, chi.rule(), xi, order, false);
      },
      xi, dec.dim, even, opts);
}

MatrixSymbol symbol_quadrature(const KernelSpec& k, const Compensator& chi,
                               const VecD& xi, const QuadratureOptions& opts) {
  if (k.is_singular())
    return symbol_quadrature(SingularDecomposition::from(k.as_singular()), chi,
                             xi, opts);
  if (chi.rule() != Compensator::Case::Zero)
    throw std::invalid_argument(
        "symbol_quadrature: integrable kernels use the zero compensator");
  const IntegrableKernel& ik = k.as_integrable();
  if (xi.norm() == 0.0) {
    MatrixSymbol sym;
    sym.xi = xi;
    sym.m = CMatD::Zero(ik.dim, ik.dim);
    sym.structure = ik.is_even() ? SymbolStructure::RealSymmetric
                                 : SymbolStructure::ComplexSymmetric;
    return sym;
  }
  return refine_symbol(
      [&](int order) {
        return assemble_integrable_at_order(ik, xi, order, false);
      },
      xi, ik.dim, ik.is_even(), opts);
}

MatrixSymbol even_part_symbol(const SingularDecomposition& dec, const VecD& xi,
                              const QuadratureOptions& opts) {
  SingularDecomposition even = dec;
  for (auto& p : even.parts) p.m.c1 = 0.0;  // even part of the direction factor
  if (xi.norm() == 0.0) {
    MatrixSymbol sym;
    sym.xi = xi;
    sym.m = CMatD::Zero(dec.dim, dec.dim);
    sym.structure = SymbolStructure::RealSymmetric;
    return sym;
  }
  return refine_symbol(
      [&](int order) {
        return assemble_singular_at_order(even, Compensator::Case::Zero, xi,
                                          order, true);
      },
      xi, dec.dim, true, opts);
}

MatrixSymbol even_part_symbol(const KernelSpec& k, const VecD& xi,
                              const QuadratureOptions& opts) {
  if (k.is_singular()) {
    // bypass the s=1/2 gate: the even part needs no compensator at all
    SingularDecomposition dec;
    dec.dim = k.as_singular().dim;
    dec.s = k.as_singular().s;
    dec.parts.push_back({1.0, k.as_singular().m, k.as_singular().cone, 0.0,
                         k.as_singular().truncation});
    return even_part_symbol(dec, xi, opts);
  }
  const IntegrableKernel& ik = k.as_integrable();
  if (xi.norm() == 0.0) {
    MatrixSymbol sym;
    sym.xi = xi;
    sym.m = CMatD::Zero(ik.dim, ik.dim);
    sym.structure = SymbolStructure::RealSymmetric;
    return sym;
  }
  return refine_symbol(
      [&](int order) {
        return assemble_integrable_at_order(ik, xi, order, true);
      },
      xi, ik.dim, true, opts);
}

LameConstants compute_lame_constants(int dim, double s,
                                     const QuadratureOptions& opts) {
  require_dim(dim, "compute_lame_constants");
  if (!(s > 0) || !(s < 1))
    throw std::invalid_argument("compute_lame_constants: s must lie in (0,1)");
  SingularKernel frac;
  frac.dim = dim;
  frac.s = s;
  frac.m = DirectionWeight::constant(1.0);
  frac.cone = ConeSpec::Full(dim);
  frac.truncation = kInf;
  QuadratureOptions tight = opts;
  tight.target_rel_error = std::min(opts.target_rel_error, 1e-11);
  tight.min_angular_order = std::max(opts.min_angular_order, 64);
  tight.max_angular_order = std::max(opts.max_angular_order, 1024);
  VecD e1 = VecD::Zero(dim);
  e1[0] = 1.0;
  MatrixSymbol sym = symbol_quadrature(SingularDecomposition::from(frac),
                                       Compensator{s}, e1, tight);
  const double scale = std::pow(kTwoPi, 2.0 * s);
  LameConstants c;
  c.dim = dim;
  c.s = s;
  c.l1 = sym.m(1, 1).real() / scale;
  c.l2 = (sym.m(0, 0).real() - sym.m(1, 1).real()) / scale;
  c.est_rel_error = sym.est_rel_error;
  if (!(c.l1 > 0) || !(c.l2 > 0))
    throw numeric_error("compute_lame_constants: nonpositive constant");
  return c;
}

MatrixSymbol analytic_fraclame_symbol(const LameConstants& c, const VecD& xi) {
  MatrixSymbol sym;
  sym.xi = xi;
  sym.provenance = SymbolProvenance::Analytic;
  sym.structure = SymbolStructure::RealSymmetric;
  const int d = c.dim;
  double n = xi.norm();
  if (n == 0.0) {
    sym.m = CMatD::Zero(d, d);
    return sym;
  }
  VecD xihat = xi / n;
  MatD m = std::pow(kTwoPi * n, 2.0 * c.s) *
           (c.l1 * MatD::Identity(d, d) + c.l2 * outer(xihat));
  sym.m = m.cast<Complex>();
  return sym;
}

PsiMinResult psi_min(const ConeSpec& cone, double s,
                     const QuadratureOptions& opts) {
  const int d = cone.dim();
  SingularDecomposition dec;
  dec.dim = d;
  dec.s = s;
  dec.parts.push_back({1.0, DirectionWeight::constant(1.0), cone, 0.0, kInf});

  auto min_eig = [&](const VecD& eta, VecD* vec) {
    MatrixSymbol w = even_part_symbol(dec, eta, opts);
    MatD re = w.m.real();
    Eigen::SelfAdjointEigenSolver<MatD> es(re);
    if (vec) *vec = es.eigenvectors().col(0);
    return es.eigenvalues()(0);
  };

  auto eta_of = [&](double theta, double phi) {
    VecD eta(d);
    if (d == 2) {
      eta[0] = std::cos(phi);
      eta[1] = std::sin(phi);
    } else {
      eta[0] = std::sin(theta) * std::cos(phi);
      eta[1] = std::sin(theta) * std::sin(phi);
      eta[2] = std::cos(theta);
    }
    return eta;
  };

  double best = kInf, best_theta = kPi / 2, best_phi = 0;
  if (d == 2) {
    const int n = 64;
    for (int i = 0; i < n; ++i) {
      double phi = kPi * i / n;  // Psi(eta) is even in eta
      double v = min_eig(eta_of(0, phi), nullptr);
      if (v < best) {
        best = v;
        best_phi = phi;
      }
    }
    // golden-section refinement around the best grid angle
    double lo = best_phi - kPi / n, hi = best_phi + kPi / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = min_eig(eta_of(0, x1), nullptr);
    double f2 = min_eig(eta_of(0, x2), nullptr);
    for (int it = 0; it < 50 && hi - lo > 1e-10; ++it) {
      if (f1 < f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = min_eig(eta_of(0, x1), nullptr);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = min_eig(eta_of(0, x2), nullptr);
      }
    }
    best_phi = 0.5 * (lo + hi);
    best = min_eig(eta_of(0, best_phi), nullptr);
  } else {
    const int nt = 32, np = 64;
    for (int i = 0; i < nt; ++i) {
      double theta = kPi * (i + 0.5) / (2 * nt);  // hemisphere: even in eta
      for (int j = 0; j < np; ++j) {
        double phi = kTwoPi * j / np;
        double v = min_eig(eta_of(theta, phi), nullptr);
        if (v < best) {
          best = v;
          best_theta = theta;
          best_phi = phi;
        }
      }
    }
    // Nelder-Mead on (theta, phi)
    struct Pt { double t, p, f; };
    auto F = [&](double t, double p) { return min_eig(eta_of(t, p), nullptr); };
    double h = kPi / nt;
    std::array<Pt, 3> simplex{Pt{best_theta, best_phi, best},
                              Pt{best_theta + h, best_phi, 0},
                              Pt{best_theta, best_phi + h, 0}};
    simplex[1].f = F(simplex[1].t, simplex[1].p);
    simplex[2].f = F(simplex[2].t, simplex[2].p);
    for (int it = 0; it < 120; ++it) {
      std::sort(simplex.begin(), simplex.end(),
                [](const Pt& a, const Pt& b) { return a.f < b.f; });
      if (std::abs(simplex[2].f - simplex[0].f) <
          1e-6 * (std::abs(simplex[0].f) + 1e-30))
        break;
      double ct = 0.5 * (simplex[0].t + simplex[1].t);
      double cp = 0.5 * (simplex[0].p + simplex[1].p);
      double rt = ct + (ct - simplex[2].t), rp = cp + (cp - simplex[2].p);
      double fr = F(rt, rp);
      if (fr < simplex[0].f) {
        double et = ct + 2 * (ct - simplex[2].t), ep = cp + 2 * (cp - simplex[2].p);
        double fe = F(et, ep);
        simplex[2] = fe < fr ? Pt{et, ep, fe} : Pt{rt, rp, fr};
      } else if (fr < simplex[1].f) {
        simplex[2] = Pt{rt, rp, fr};
      } else {
        double kt = ct + 0.5 * (simplex[2].t - ct), kp = cp + 0.5 * (simplex[2].p - cp);
        double fk = F(kt, kp);
        if (fk < simplex[2].f) {
          simplex[2] = Pt{kt, kp, fk};
        } else {
          for (int i = 1; i < 3; ++i) {
            simplex[i].t = 0.5 * (simplex[i].t + simplex[0].t);
            simplex[i].p = 0.5 * (simplex[i].p + simplex[0].p);
            simplex[i].f = F(simplex[i].t, simplex[i].p);
          }
        }
      }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const Pt& a, const Pt& b) { return a.f < b.f; });
    best_theta = simplex[0].t;
    best_phi = simplex[0].p;
    best = simplex[0].f;
  }

  PsiMinResult res;
  res.eta = eta_of(best_theta, best_phi);
  VecD v(d);
  res.value = min_eig(res.eta, &v);
  res.v = v;
  if (!(res.value > 0))
    throw numeric_error("psi_min: estimate is not strictly positive");
  return res;
}

UpperBoundReport symbol_upper_bound_check(const HomotopyKernel& h,
                                          const std::vector<double>& t_samples,
                                          int j_min, int j_max,
                                          const QuadratureOptions& opts) {
  const int d = h.base.dim;
  std::vector<VecD> dirs;
  VecD e1 = VecD::Zero(d);
  e1[0] = 1.0;
  dirs.push_back(e1);
  VecD g(d);
  g[0] = 1.0;
  g[1] = 0.6;
  if (d == 3) g[2] = 0.35;
  dirs.push_back(g / g.norm());

  UpperBoundReport rep;
  rep.j_min = j_min;
  rep.j_max = j_max;
  rep.octave_sup.assign(j_max - j_min + 1, 0.0);
  for (double t : t_samples) {
    HomotopyKernel ht = h;
    ht.t = t;
    SingularDecomposition dec = SingularDecomposition::from(ht);
    Compensator chi{h.base.s};
    for (int j = j_min; j <= j_max; ++j) {
      for (const auto& dir : dirs) {
        VecD xi = std::ldexp(1.0, j) * dir;
        MatrixSymbol sym = symbol_quadrature(dec, chi, xi, opts);
        double ratio = sym.m.norm() / std::pow(kTwoPi * xi.norm(), 2.0 * h.base.s);
        rep.octave_sup[j - j_min] = std::max(rep.octave_sup[j - j_min], ratio);
        rep.sup_ratio = std::max(rep.sup_ratio, ratio);
      }
    }
  }
  double top = rep.octave_sup[j_max - j_min];
  double prev = rep.octave_sup[j_max - 1 - j_min];
  rep.top_octave_variation =
      std::max(top, prev) / std::max(std::min(top, prev), 1e-300);
  rep.pass = std::isfinite(rep.sup_ratio) && rep.top_octave_variation < 2.0;
  return rep;
}

std::pair<double, double> radial_symbol_eigenvalues(
    const IntegrableKernel& k, const VecD& xi, const QuadratureOptions& opts) {
  if (!k.is_radial())
    throw std::invalid_argument("radial_symbol_eigenvalues: kernel not radial");
  const int d = k.dim;
  const double xin = xi.norm();
  if (xin == 0.0) return {0.0, 0.0};
  const double R = k.support_radius();

  auto radial = [&](double nu1) {
    double a = kTwoPi * xin * nu1;
    int panels = std::max(8, static_cast<int>(std::ceil(std::abs(a) * R / kPi)));
    panels = std::min(panels, 1 << 14);
    double acc = 0;
    const GaussRule& gr = gauss_legendre(8);
    for (int p = 0; p < panels; ++p) {
      double lo = R * p / panels, hi = R * (p + 1) / panels;
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int q = 0; q < 8; ++q) {
        double tau = mid + half * gr.nodes[q];
        acc += half * gr.weights[q] * k.radial_profile(tau) *
               std::pow(tau, d - 1) * one_minus_cos(a * tau);
      }
    }
    return acc;
  };

  double prev1 = 0, prev2 = 0;
  for (int order = opts.min_angular_order;; order *= 2) {
    double l1 = 0, l2 = 0;
    if (d == 2) {
      const GaussRule& gr = gauss_legendre(order);
      for (int i = 0; i < order; ++i) {
        double th = kPi * (0.5 + 0.5 * gr.nodes[i]);  // [0, pi], symmetric set
        double w = kPi * 0.5 * gr.weights[i] * 2.0;
        double c = std::cos(th), sn = std::sin(th);
        double rad = radial(c);
        l1 += w * c * c * rad;
        l2 += w * sn * sn * rad;
      }
    } else {
      const GaussRule& gr = gauss_legendre(order);
      for (int i = 0; i < order; ++i) {
        double u = gr.nodes[i];  // nu1 = u, weight over S^2: 2 pi du
        double w = gr.weights[i] * kTwoPi;
        double rad = radial(u);
        l1 += w * u * u * rad;
        l2 += w * 0.5 * (1.0 - u * u) * rad;
      }
    }
    if (order > opts.min_angular_order) {
      double delta = std::abs(l1 - prev1) + std::abs(l2 - prev2);
      if (delta <= opts.target_rel_error * (std::abs(l1) + std::abs(l2) + 1e-300))
        return {l1, l2};
    }
    prev1 = l1;
    prev2 = l2;
    if (2 * order > opts.max_angular_order) return {l1, l2};
  }
}

// --- SymbolTable ------------------------------------------------------------

CMatD SymbolTable::at(std::int64_t mode) const {
  CMatD m(dim_, dim_);
  const Complex* p = &entries_[static_cast<size_t>(mode) * dim_ * dim_];
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = p[i * dim_ + j];
  return m;
}

void SymbolTable::set(std::int64_t mode, const CMatD& m) {
  Complex* p = &entries_[static_cast<size_t>(mode) * dim_ * dim_];
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) p[i * dim_ + j] = m(i, j);
}

SymbolTable SymbolTable::build(const KernelSpec& k, const GridSpec& grid,
                               const QuadratureOptions& opts, int threads) {
  grid.validate();
  if (k.dim() != grid.dim)
    throw std::invalid_argument("SymbolTable: kernel/grid dimension mismatch");
  SymbolTable t;
  t.grid_ = grid;
  t.dim_ = grid.dim;
  t.real_symmetric_ = k.is_even();
  const std::int64_t modes = grid.num_nodes();
  t.entries_.assign(static_cast<size_t>(modes) * t.dim_ * t.dim_, Complex(0, 0));

  // decompose once (this also runs the s = 1/2 cancellation gate)
  const bool singular = k.is_singular();
  SingularDecomposition dec;
  Compensator chi = Compensator::for_kernel(k);
  if (singular) dec = SingularDecomposition::from(k.as_singular());

  std::vector<std::int64_t> canonical;
  canonical.reserve(static_cast<size_t>(modes) / 2 + 8);
  for (std::int64_t m = 0; m < modes; ++m)
    if (grid.conjugate_mode(m) >= m) canonical.push_back(m);

  std::vector<double> errs(canonical.size(), 0.0);
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      std::int64_t mode = canonical[i];
      VecD xi = grid.frequency(mode);
      if (xi.norm() == 0.0) continue;  // M(0) = 0
      MatrixSymbol sym = singular ? symbol_quadrature(dec, chi, xi, opts)
                                  : symbol_quadrature(k, chi, xi, opts);
      CMatD m = sym.m;
      if (t.real_symmetric_ || grid.conjugate_mode(mode) == mode)
        m = m.real().cast<Complex>();  // self-paired modes must stay real
      t.set(mode, m);
      errs[i] = sym.est_rel_error;
    }
  };
  threads = std::max(1, threads);
  if (threads == 1) {
    work(0, canonical.size());
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (canonical.size() + threads - 1) / threads;
    for (int th = 0; th < threads; ++th) {
      size_t b = th * chunk, e = std::min(canonical.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  for (double e : errs) t.max_err_ = std::max(t.max_err_, e);

  for (std::int64_t m = 0; m < modes; ++m) {
    std::int64_t cm = grid.conjugate_mode(m);
    if (cm < m) t.set(m, t.at(cm).conjugate());
  }
  return t;
}

SymbolTable SymbolTable::from_analytic(const LameConstants& c,
                                       const GridSpec& grid) {
  grid.validate();
  if (c.dim != grid.dim)
    throw std::invalid_argument("SymbolTable: constants/grid dimension mismatch");
  SymbolTable t;
  t.grid_ = grid;
  t.dim_ = grid.dim;
  t.real_symmetric_ = true;
  const std::int64_t modes = grid.num_nodes();
  t.entries_.assign(static_cast<size_t>(modes) * t.dim_ * t.dim_, Complex(0, 0));
  for (std::int64_t m = 0; m < modes; ++m)
    t.set(m, analytic_fraclame_symbol(c, grid.frequency(m)).m);
  return t;
}

void SymbolTable::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("SymbolTable::write_csv: cannot open " + path);
  os << "xi0";
  for (int a = 1; a < dim_; ++a) os << ",xi" << a;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) os << ",re" << i << j;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) os << ",im" << i << j;
  os << "\n";
  char buf[32];
  for (std::int64_t m = 0; m < grid_.num_nodes(); ++m) {
    VecD xi = grid_.frequency(m);
    bool first = true;
    for (int a = 0; a < dim_; ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", xi[a]);
      os << (first ? "" : ",") << buf;
      first = false;
    }
    CMatD mm = at(m);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", mm(i, j).real());
        os << "," << buf;
      }
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", mm(i, j).imag());
        os << "," << buf;
      }
    os << "\n";
  }
}

// --- ResolventTable ----------------------------------------------------------

CMatD ResolventTable::at(std::int64_t mode) const {
  CMatD m(dim_, dim_);
  const Complex* p = &entries_[static_cast<size_t>(mode) * dim_ * dim_];
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = p[i * dim_ + j];
  return m;
}

ResolventTable ResolventTable::build(const SymbolTable& table, double lambda) {
  if (lambda < 0)
    throw std::invalid_argument("resolvent: lambda must be nonnegative");
  ResolventTable r;
  r.grid_ = table.grid();
  r.dim_ = table.grid().dim;
  r.lambda_ = lambda;
  const std::int64_t modes = r.grid_.num_nodes();
  r.entries_.assign(static_cast<size_t>(modes) * r.dim_ * r.dim_, Complex(0, 0));
  const CMatD eye = CMatD::Identity(r.dim_, r.dim_);
  for (std::int64_t m = 0; m < modes; ++m) {
    CMatD A = table.at(m) + lambda * eye;
    bool zero_mode = r.grid_.frequency(m).norm() == 0.0;
    if (zero_mode && lambda == 0.0 && A.norm() == 0.0) {
      r.zero_mode_excluded_ = true;
      continue;  // inverse left zero; solves must not touch this mode
    }
    Eigen::PartialPivLU<CMatD> lu(A);
    CMatD inv = lu.solve(eye);
    double cond = A.norm() * inv.norm();
    double residual = (inv * A - eye).norm();
    if (!std::isfinite(cond) || cond > 1e12 || residual > 1e-12) {
      auto k = r.grid_.mode_indices(m);
      std::ostringstream os;
      os << "resolvent: singular or ill-conditioned mode k = (" << k[0] << ","
         << k[1];
      if (r.dim_ == 3) os << "," << k[2];
      os << "), cond ~ " << cond << ", product residual " << residual;
      throw solver_error(os.str());
    }
    r.max_residual_ = std::max(r.max_residual_, residual);
    Complex* p = &r.entries_[static_cast<size_t>(m) * r.dim_ * r.dim_];
    for (int i = 0; i < r.dim_; ++i)
      for (int j = 0; j < r.dim_; ++j) p[i * r.dim_ + j] = inv(i, j);
  }
  return r;
}

}  // namespace nlwave

#include "nlwave/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace nlwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Switch point between direct panel integration and tail series.
constexpr double kTailCut = 40.0;

GaussRule make_gauss(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  // Newton iteration on Legendre polynomials, symmetric nodes.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      double dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double dp = n * (x * p0 - p1) / (x * x - 1.0);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_gauss(order)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order) {
  const GaussRule& r = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0;
  for (int i = 0; i < order; ++i)
    acc += r.weights[i] * f(mid + half * r.nodes[i]);
  return acc * half;
}

double integrate_graded(const std::function<double(double)>& f, double a,
                        double b, int order, int max_panels) {
  if (b <= a) return 0.0;
  double total = 0;
  double hi = b;
  for (int k = 0; k < max_panels; ++k) {
    double lo = a + (hi - a) * 0.5;
    // last panel reaches down to a exactly once contributions are negligible
    double piece = integrate_gl(f, lo, hi, order);
    total += piece;
    hi = lo;
    if (std::abs(piece) < 1e-17 * (std::abs(total) + 1e-300) && k > 8) break;
    if (hi - a < 1e-300) break;
  }
  return total;
}

double one_minus_cos(double w) {
  double t = std::sin(0.5 * w);
  return 2.0 * t * t;
}

double w_minus_sin(double w) {
  double aw = std::abs(w);
  if (aw < 0.5) {
    double w2 = w * w;
    return w * w2 / 6.0 *
           (1.0 -
            w2 / 20.0 *
                (1.0 -
                 w2 / 42.0 *
                     (1.0 - w2 / 72.0 * (1.0 - w2 / 110.0 * (1.0 - w2 / 156.0)))));
  }
  return w - std::sin(w);
}

double kc_infinity(double s) {
  if (s <= 0.0 || s >= 1.0) throw config_error("kc_infinity: s must be in (0,1)");
  if (std::abs(s - 0.5) < 1e-9) {
    // limit of Gamma(2-2s) cos(pi s) / (2s(1-2s)) at s = 1/2 is pi/2;
    // expand linearly around it for nearby s to avoid the 0/0 form
    double eps = s - 0.5;
    if (eps == 0.0) return 0.5 * kPi;
    double h = 1e-6;
    double lo = kc_infinity(0.5 - h), hi = kc_infinity(0.5 + h);
    return 0.5 * (lo + hi) + eps * (hi - lo) / (2 * h);
  }
  return std::tgamma(2.0 - 2.0 * s) * std::cos(kPi * s) / (2.0 * s * (1.0 - 2.0 * s));
}

double ks_infinity(double s) {
  if (s <= 0.0 || s >= 0.5) throw config_error("ks_infinity: s must be in (0,1/2)");
  return -std::tgamma(-2.0 * s) * std::sin(kPi * s);
}

double kws_infinity(double s) {
  if (s <= 0.5 || s >= 1.0) throw config_error("kws_infinity: s must be in (1/2,1)");
  return std::tgamma(-2.0 * s) * std::sin(kPi * s);
}

std::pair<double, double> oscillatory_tails(double X, double p) {
  // I_c = sum_j (-1)^{j+1} [sin X g^{(2j)} + cos X g^{(2j+1)}],
  // I_s = sum_j (-1)^j   [cos X g^{(2j)} - sin X g^{(2j+1)}],
  // with g(w) = w^p, g^{(k)}(X) = coef_k X^{p-k}.
  const double c = std::cos(X), s = std::sin(X);
  double coef = 1.0;
  double xk = std::pow(X, p);
  double Ic = 0, Is = 0;
  double prev = kInf;
  for (int k = 0; k < 80; ++k) {
    double term = coef * xk;
    if (std::abs(term) > prev) break;  // asymptotic series started diverging
    prev = std::abs(term);
    switch (k % 4) {
      case 0: Ic += -s * term; Is += c * term; break;
      case 1: Ic += -c * term; Is += -s * term; break;
      case 2: Ic += s * term; Is += -c * term; break;
      case 3: Ic += c * term; Is += s * term; break;
    }
    if (std::abs(term) < 1e-18) break;
    coef *= (p - k);
    xk /= X;
  }
  return {Ic, Is};
}

namespace {

// Direct panel value of int_a^b f(w) w^{-1-2s} dw for the three profiles on a
// finite range with b <= kTailCut (plus a little slack).
enum class Profile { OneMinusCos, Sin, WMinusSin };

double profile_val(Profile pr, double w) {
  switch (pr) {
    case Profile::OneMinusCos: return one_minus_cos(w);
    case Profile::Sin: return std::sin(w);
    case Profile::WMinusSin: return w_minus_sin(w);
  }
  return 0;
}

double panels_from_zero(Profile pr, double X, double s) {
  auto f = [&](double w) { return profile_val(pr, w) * std::pow(w, -1.0 - 2.0 * s); };
  return integrate_graded(f, 0.0, X, 16);
}

double panels_segment(Profile pr, double a, double b, double s) {
  // smooth on [a,b] with a > 0; split into at most one panel per half period
  auto f = [&](double w) { return profile_val(pr, w) * std::pow(w, -1.0 - 2.0 * s); };
  int n = std::max(1, static_cast<int>(std::ceil((b - a) / kPi)));
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    double lo = a + (b - a) * i / n, hi = a + (b - a) * (i + 1) / n;
    acc += integrate_gl(f, lo, hi, 16);
  }
  return acc;
}

}  // namespace

double fc(double X, double s) {
  if (X <= 0) return 0.0;
  if (std::isinf(X)) return kc_infinity(s);
  if (X <= kTailCut) return panels_from_zero(Profile::OneMinusCos, X, s);
  auto [Ic, Is] = oscillatory_tails(X, -1.0 - 2.0 * s);
  (void)Is;
  double tail = std::pow(X, -2.0 * s) / (2.0 * s) - Ic;
  return kc_infinity(s) - tail;
}

double fsin(double X, double s) {
  if (X <= 0) return 0.0;
  if (s >= 0.5) throw config_error("fsin: requires s < 1/2 at X from 0");
  if (std::isinf(X)) return ks_infinity(s);
  if (X <= kTailCut) return panels_from_zero(Profile::Sin, X, s);
  auto [Ic, Is] = oscillatory_tails(X, -1.0 - 2.0 * s);
  (void)Ic;
  return ks_infinity(s) - Is;
}

double fws(double X, double s) {
  if (X <= 0) return 0.0;
  if (std::isinf(X)) return kws_infinity(s);  // throws unless s > 1/2
  if (X <= kTailCut) return panels_from_zero(Profile::WMinusSin, X, s);
  // accumulate the smooth remainder beyond the cut analytically
  double base = panels_from_zero(Profile::WMinusSin, kTailCut, s);
  double lin;
  if (std::abs(1.0 - 2.0 * s) < 1e-12)
    lin = std::log(X / kTailCut);
  else
    lin = (std::pow(X, 1.0 - 2.0 * s) - std::pow(kTailCut, 1.0 - 2.0 * s)) /
          (1.0 - 2.0 * s);
  auto tc = oscillatory_tails(kTailCut, -1.0 - 2.0 * s);
  auto tx = oscillatory_tails(X, -1.0 - 2.0 * s);
  return base + lin - (tc.second - tx.second);
}

double fsin_seg(double a, double b, double s) {
  if (b <= a) return 0.0;
  if (a <= 0.0) {
    if (std::isinf(b)) return ks_infinity(s);
    return fsin(b, s);
  }
  if (std::isinf(b)) {
    if (a >= kTailCut) return oscillatory_tails(a, -1.0 - 2.0 * s).second;
    return panels_segment(Profile::Sin, a, kTailCut, s) +
           oscillatory_tails(kTailCut, -1.0 - 2.0 * s).second;
  }
  if (b <= kTailCut) return panels_segment(Profile::Sin, a, b, s);
  if (a >= kTailCut) {
    auto ta = oscillatory_tails(a, -1.0 - 2.0 * s);
    auto tb = oscillatory_tails(b, -1.0 - 2.0 * s);
    return ta.second - tb.second;
  }
  return panels_segment(Profile::Sin, a, kTailCut, s) + fsin_seg(kTailCut, b, s);
}

double fc_seg(double a, double b, double s) {
  if (b <= a) return 0.0;
  if (a <= 0.0) return fc(b, s);
  if (!std::isinf(b) && b <= kTailCut)
    return panels_segment(Profile::OneMinusCos, a, b, s);
  return fc(b, s) - fc(a, s);
}

double fws_seg(double a, double b, double s) {
  if (b <= a) return 0.0;
  if (a <= 0.0) return fws(b, s);
  if (!std::isinf(b) && b <= kTailCut)
    return panels_segment(Profile::WMinusSin, a, b, s);
  if (std::isinf(b)) return kws_infinity(s) - fws(a, s);
  return fws(b, s) - fws(a, s);
}

double fhalf(double X, double c) {
  // int_0^X (w 1_{w<c} - sin w) w^{-2} dw, c >= 0
  if (X <= 0) return 0.0;
  double cc = std::min(c, X);
  double head = cc > 0 ? fws(cc, 0.5) : 0.0;
  return head - fsin_seg(cc, X, 0.5);
}

double fhalf_seg(double a, double b, double c) {
  if (b <= a) return 0.0;
  if (a <= 0.0) return fhalf(b, c);
  double m = std::min(std::max(c, a), b);  // compensator active on [a, m)
  return fws_seg(a, m, 0.5) - fsin_seg(m, b, 0.5);
}

}  // namespace nlwave

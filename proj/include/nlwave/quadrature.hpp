#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nlwave/types.hpp"

namespace nlwave {

/// Gauss-Legendre rule on [-1,1]; nodes/weights cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// Integrate f on [a,b] with a single Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order);

/// Integrate f on [a,b] split into geometrically graded panels accumulating
/// toward a (for integrable endpoint singularities at a).
double integrate_graded(const std::function<double(double)>& f, double a,
                        double b, int order, int max_panels = 2000);

// ---------------------------------------------------------------------------
// One-dimensional radial integrals of the singular kernel profiles. All of
// them are expressed in the scaled variable w = |a| tau so that only the
// following scale-free primitives are ever evaluated:
//
//   fc(X, s)      = int_0^X (1 - cos w) w^{-1-2s} dw
//   fsin(X, s)    = int_0^X sin(w) w^{-1-2s} dw            (needs s < 1/2)
//   fws(X, s)     = int_0^X (w - sin w) w^{-1-2s} dw
//   fhalf(X, c)   = int_0^X (w 1_{w<c} - sin w) w^{-2} dw  (s = 1/2 case)
//
// X may be +infinity where the integral converges; closed forms of the
// X = infinity values are exposed separately so tests can cross-check them
// against brute-force quadrature.
// ---------------------------------------------------------------------------

/// int_0^inf (1-cos w) w^{-1-2s} dw, s in (0,1).
double kc_infinity(double s);
/// int_0^inf sin(w) w^{-1-2s} dw, s in (0,1/2).
double ks_infinity(double s);
/// int_0^inf (w - sin w) w^{-1-2s} dw, s in (1/2,1).
double kws_infinity(double s);

/// Tails int_X^inf cos(w) w^p dw and int_X^inf sin(w) w^p dw for p < 0 and
/// X large enough that the integration-by-parts series converges (X >= 20).
std::pair<double, double> oscillatory_tails(double X, double p);

double fc(double X, double s);
double fsin(double X, double s);
double fws(double X, double s);
double fhalf(double X, double c);

/// Segment values on [a,b], 0 <= a <= b <= inf.
double fc_seg(double a, double b, double s);
double fsin_seg(double a, double b, double s);
double fws_seg(double a, double b, double s);
double fhalf_seg(double a, double b, double c);

/// Numerically stable 1 - cos(w) and w - sin(w).
double one_minus_cos(double w);
double w_minus_sin(double w);

}  // namespace nlwave

#pragma once

#include <variant>
#include <vector>

#include "nlwave/cone.hpp"
#include "nlwave/types.hpp"

namespace nlwave {

/// Bounded direction factor m(y) = c0 + c1 (yhat.e) + c2 (yhat.e)^2.
/// Depends on the direction of y only, which keeps the radial integrals of
/// every Class B kernel in closed form.
struct DirectionWeight {
  double c0 = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;
  VecD axis;  // unit vector; ignored when c1 == c2 == 0

  static DirectionWeight constant(double c);

  double operator()(const VecD& nu) const;
  double min_value() const;
  double max_value() const;
  bool is_even() const { return c1 == 0.0; }
};

/// Class B kernel m(y) |y|^{-d-2s} restricted to the truncated double cone
/// Lambda_r = Lambda n B_r.
struct SingularKernel {
  int dim = 2;
  double s = 0.5;
  DirectionWeight m;
  ConeSpec cone = ConeSpec::Full(2);
  double truncation = std::numeric_limits<double>::infinity();

  void validate() const;
  double alpha1() const { return m.min_value(); }
  double alpha2() const { return m.max_value(); }
  bool is_even() const { return m.is_even(); }
  /// Pointwise value; 0 outside Lambda_r, domain_error at y = 0.
  double eval(const VecD& y) const;
};

// --- Class A named families ------------------------------------------------

/// Constant density on the ball B_radius with prescribed total mass.
struct BallKernel {
  double radius;
  double mass;
};

/// Isotropic Gaussian with standard deviation sigma and total mass `mass`.
struct GaussianKernel {
  double sigma;
  double mass;
};

/// Gaussian translated away from the origin: integrable but not even.
struct OffsetGaussianKernel {
  double sigma;
  VecD center;
  double mass;
};

/// Constant density on Lambda n B_radius: anisotropic indicator.
struct ConeIndicatorKernel {
  double radius;
  ConeSpec cone;
  double mass;
};

struct IntegrableKernel {
  int dim = 2;
  std::variant<BallKernel, GaussianKernel, OffsetGaussianKernel,
               ConeIndicatorKernel>
      family;

  void validate() const;
  double eval(const VecD& y) const;
  double l1_mass() const;
  bool is_even() const;
  bool is_radial() const;
  /// Radius beyond which the density is zero or negligible (< 1e-40 of peak).
  double support_radius() const;
  /// rho as a function of |y| for radial families; invalid_argument otherwise.
  double radial_profile(double tau) const;
};

/// Interaction kernel: either Class A (integrable) or Class B (singular).
class KernelSpec {
 public:
  static KernelSpec integrable(IntegrableKernel k);
  static KernelSpec singular(SingularKernel k);

  bool is_integrable() const { return kind_ == Kind::Integrable; }
  bool is_singular() const { return kind_ == Kind::Singular; }
  const IntegrableKernel& as_integrable() const;
  const SingularKernel& as_singular() const;

  int dim() const;
  double eval(const VecD& y) const;
  bool is_even() const;

 private:
  enum class Kind { Integrable, Singular } kind_ = Kind::Integrable;
  IntegrableKernel integrable_{};
  SingularKernel singular_{};
};

/// chi^{(s)}: 0 for s < 1/2, indicator of B_1 at s = 1/2, 1 for s > 1/2.
struct Compensator {
  enum class Case { Zero, UnitBall, One };

  double s = 0.5;
  Case rule() const;
  double operator()(const VecD& y) const;

  /// Class A kernels use chi = 0; Class B kernels use the s-rule.
  static Compensator for_kernel(const KernelSpec& k);
};

/// rho_t = t rho + (1-t) alpha1 |y|^{-d-2s}: straight-line family between the
/// reference fractional kernel (t=0) and the given Class B kernel (t=1).
struct HomotopyKernel {
  SingularKernel base;
  double t = 1.0;

  void validate() const;
  double eval(const VecD& y) const;
};

/// rho~_t = rho_t + t alpha1 |y|^{-d-2s} 1_{Lambda n complement(B_r)}:
/// restores the fractional lower bound on all of Lambda.
struct ModifiedKernel {
  HomotopyKernel h;
  double eval(const VecD& y) const;
};
ModifiedKernel modified_kernel(const HomotopyKernel& h);

struct CancellationReport {
  double max_normalized_moment = 0.0;
  double worst_radius = 0.0;
  int worst_i = 0, worst_j = 0, worst_k = 0;
  bool pass = false;
};

/// Checks the third-moment surface integrals on spheres of the given radii,
/// normalized by alpha2 mu^{2-2s}. Pass threshold 1e-8.
CancellationReport check_cancellation(const SingularKernel& k,
                                      const std::vector<double>& radii,
                                      int quad_order = 64);

struct N2Result {
  double value = 0.0;
  bool infinite_radius = false;
};

/// N2 = ((1 + alpha1)/s) sigma(Gamma u -Gamma) r^{-2s}; 0 in the limit
/// r = infinity (flagged).
N2Result n2_constant(const SingularKernel& k);

}  // namespace nlwave

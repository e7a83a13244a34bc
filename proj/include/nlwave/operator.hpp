#pragma once

#include <memory>

#include "nlwave/smooth_field.hpp"
#include "nlwave/symbol.hpp"

namespace nlwave {

/// Kernel + compensator + shift lambda + cached symbol table on one grid.
class OperatorHandle {
 public:
  static OperatorHandle create(const KernelSpec& kernel, double lambda,
                               const GridSpec& grid,
                               const QuadratureOptions& opts = {},
                               int threads = 1);

  const KernelSpec& kernel() const { return kernel_; }
  const Compensator& compensator() const { return chi_; }
  double lambda() const { return lambda_; }
  const GridSpec& grid() const { return table_.grid(); }
  const SymbolTable& table() const { return table_; }

 private:
  KernelSpec kernel_;
  Compensator chi_{0.25};
  double lambda_ = 0.0;
  SymbolTable table_;
};

/// Per-mode multiplication by M(xi_k); the action of the operator without the
/// lambda shift. Linear; constants map to zero.
VectorField apply_L_spectral(const OperatorHandle& op, const VectorField& u);
SpectralField apply_L_spectral(const OperatorHandle& op, const SpectralField& u);

struct PvOptions {
  /// Truncation radius; defaults to min(kernel r, L/2) when <= 0.
  double radius = 0.0;
  int angular_order = 32;
  int radial_order = 10;
  /// Geometric panel levels between the singular head and the radius.
  int panel_levels = 10;
  /// The head |y| < R 2^{-panel_levels} is integrated from exact Taylor data
  /// of the field (trig representation) rather than sampled: sampling the
  /// second difference there only amplifies roundoff through the kernel
  /// singularity.
  int taylor_terms = 3;
  /// Analytic tail per trigonometric mode (pure fractional kernels only).
  bool analytic_tail = true;
  /// For fields without a trig representation the graded panels stop at
  /// this fraction of the radius instead of using Taylor data.
  double direct_floor = 1e-6;
};

struct PvApplyResult {
  VecD value;         // quadrature value of (L u)(x)
  double tail_bound;  // bound on the omitted |y| > radius contribution
  bool tail_added;    // true when the analytic tail was added instead
};

/// Physical-space principal-value quadrature of the operator on a smooth
/// closed-form field. Even kernels integrate the +/- paired second difference
/// (no principal value left); non-even kernels use the compensated integrand.
/// For repeated application at many points build a PvOracle once.
class PvOracle {
 public:
  PvOracle(const KernelSpec& kernel, const SmoothVectorField& u,
           const PvOptions& opts = {});

  PvApplyResult apply(const VecD& x) const;
  double radius() const { return radius_; }

 private:
  const KernelSpec& kernel_;
  const SmoothVectorField& u_;
  PvOptions opts_;
  double radius_ = 0.0;
  bool even_ = false;
  bool fractional_tail_ = false;
  // exact trig representation when available (stable difference evaluation)
  bool have_trig_ = false;
  TrigPolynomial trig_{2, 1.0};
  // per trig mode of u: the |y| > radius remainder of the symbol
  std::vector<MatD> tail_matrices_;
  double tail_bound_ = 0.0;

  void prepare_tail();
  VecD apply_trig(const VecD& x) const;
  VecD apply_direct(const VecD& x) const;
};

PvApplyResult apply_L_quadrature(const KernelSpec& kernel,
                                 const SmoothVectorField& u, const VecD& x,
                                 const PvOptions& opts = {});

/// <L u, u> computed spectrally; requires an even kernel (real symmetric
/// symbol), for which it is nonnegative.
double bilinear_energy(const OperatorHandle& op, const VectorField& u);

}  // namespace nlwave

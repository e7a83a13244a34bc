#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlwave/field.hpp"
#include "nlwave/kernel.hpp"

namespace nlwave {

struct QuadratureOptions {
  double target_rel_error = 1e-8;
  int min_angular_order = 16;
  int max_angular_order = 512;
  /// Angular refinement that stalls above this relative change is an error.
  double fail_threshold = 1e-3;
};

enum class SymbolStructure { RealSymmetric, ComplexSymmetric };
enum class SymbolProvenance { Analytic, Quadrature };

/// d x d matrix symbol at one frequency. The sign convention is fixed so that
/// the transform of the operator applied to u is M(xi) uhat(xi); even kernels
/// then give real symmetric positive semidefinite M.
struct MatrixSymbol {
  VecD xi;
  CMatD m;
  SymbolStructure structure = SymbolStructure::ComplexSymmetric;
  SymbolProvenance provenance = SymbolProvenance::Quadrature;
  double est_rel_error = 0.0;
  int angular_order = 0;
};

/// Scaled singular pieces coeff * m(nu) |y|^{-d-2s} on cone n {r0 < |y| < r1}.
/// Plain Class B kernels, homotopy kernels and modified kernels all decompose
/// into short lists of these, which keeps the radial integrals closed-form.
struct SingularComponent {
  double coeff = 1.0;
  DirectionWeight m;
  ConeSpec cone = ConeSpec::Full(2);
  double r_inner = 0.0;
  double r_outer = std::numeric_limits<double>::infinity();
};

struct SingularDecomposition {
  int dim = 2;
  double s = 0.5;
  std::vector<SingularComponent> parts;

  /// Decompose; at s = 1/2 the cancellation condition is checked and a
  /// config_error thrown if it fails (the compensated form relies on it).
  static SingularDecomposition from(const SingularKernel& k);
  static SingularDecomposition from(const HomotopyKernel& h);
  static SingularDecomposition from(const ModifiedKernel& mk);
};

MatrixSymbol symbol_quadrature(const KernelSpec& k, const Compensator& chi,
                               const VecD& xi, const QuadratureOptions& opts = {});
MatrixSymbol symbol_quadrature(const SingularDecomposition& dec,
                               const Compensator& chi, const VecD& xi,
                               const QuadratureOptions& opts = {});

/// Real part of the symbol built from the even part of the kernel:
/// int (yhat x yhat) (1 - cos(2 pi y.xi)) rho^e(y) dy. Real symmetric PSD.
MatrixSymbol even_part_symbol(const KernelSpec& k, const VecD& xi,
                              const QuadratureOptions& opts = {});
MatrixSymbol even_part_symbol(const SingularDecomposition& dec, const VecD& xi,
                              const QuadratureOptions& opts = {});

struct LameConstants {
  int dim = 2;
  double s = 0.5;
  double l1 = 0.0;
  double l2 = 0.0;
  double est_rel_error = 0.0;
};

/// l1 = M22(e1)/(2 pi)^{2s}, l2 = (M11(e1) - M22(e1))/(2 pi)^{2s} from the
/// quadrature symbol of the kernel |y|^{-d-2s}; both strictly positive.
LameConstants compute_lame_constants(int dim, double s,
                                     const QuadratureOptions& opts = {});

/// (2 pi |xi|)^{2s} (l1 I + l2 xihat x xihat); exact closed form.
MatrixSymbol analytic_fraclame_symbol(const LameConstants& c, const VecD& xi);

struct PsiMinResult {
  double value = 0.0;
  VecD eta;  // minimizing frequency direction
  VecD v;    // minimizing unit vector (eigenvector)
};

/// Minimum over (eta, v) of Psi(eta,v) = int_Lambda (1-cos(2 pi h.eta))
/// |h|^{-d-2s} |v.h/|h||^2 dh. The minimum over v for fixed eta is the least
/// eigenvalue of the even-part symbol at eta, so the search runs over eta
/// only (coarse grid plus local refinement). Note Psi carries the (2 pi)^{2s}
/// factor: the coercivity bound reads min eig >= alpha1 * psi_min * |xi|^{2s}.
PsiMinResult psi_min(const ConeSpec& cone, double s,
                     const QuadratureOptions& opts = {});

struct UpperBoundReport {
  double sup_ratio = 0.0;
  double top_octave_variation = 0.0;  // max/min of per-octave sup, top two
  bool pass = false;
  int j_min = 0, j_max = 0;
  std::vector<double> octave_sup;  // indexed j - j_min
};

/// sup over dyadic xi and homotopy parameters of |M_t(xi)|_F/(2pi|xi|)^{2s};
/// pass iff finite and octave-stable at the top of the range.
UpperBoundReport symbol_upper_bound_check(const HomotopyKernel& h,
                                          const std::vector<double>& t_samples,
                                          int j_min = -4, int j_max = 6,
                                          const QuadratureOptions& opts = {});

/// Radial integrable kernels diagonalize in the frame aligned with xi:
/// eigenvalue l1 along xihat, l2 (multiplicity d-1) across. Both lie in
/// [0, 2 ||rho||_{L1}].
std::pair<double, double> radial_symbol_eigenvalues(
    const IntegrableKernel& k, const VecD& xi, const QuadratureOptions& opts = {});

/// Per-frequency symbol matrices on a grid. Entries at mirrored modes are
/// exact conjugates; self-paired (Nyquist) modes are realified so the
/// operator maps real fields to real fields.
class SymbolTable {
 public:
  static SymbolTable build(const KernelSpec& k, const GridSpec& grid,
                           const QuadratureOptions& opts = {}, int threads = 1);
  static SymbolTable from_analytic(const LameConstants& c, const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  CMatD at(std::int64_t mode) const;
  bool real_symmetric() const { return real_symmetric_; }
  double max_est_rel_error() const { return max_err_; }
  void write_csv(const std::string& path) const;

 private:
  GridSpec grid_;
  int dim_ = 2;
  bool real_symmetric_ = false;
  double max_err_ = 0.0;
  std::vector<Complex> entries_;  // d*d row-major per mode

  void set(std::int64_t mode, const CMatD& m);
  friend class ResolventTable;
};

/// Per-frequency inverses (M(xi_k) + lambda I)^{-1} with per-mode product
/// residual <= 1e-12. lambda = 0 requires nonsingular nonzero modes; the zero
/// mode is then excluded (flagged) and must not be touched by solves.
class ResolventTable {
 public:
  static ResolventTable build(const SymbolTable& table, double lambda);

  double lambda() const { return lambda_; }
  bool zero_mode_excluded() const { return zero_mode_excluded_; }
  double max_product_residual() const { return max_residual_; }
  CMatD at(std::int64_t mode) const;

 private:
  GridSpec grid_;
  int dim_ = 2;
  double lambda_ = 0.0;
  bool zero_mode_excluded_ = false;
  double max_residual_ = 0.0;
  std::vector<Complex> entries_;
};

// --- Fourier multipliers of the fractional Lame resolvent -----------------

/// m1 = (1+4pi^2|xi|^2)^s / (l1 (4pi^2|xi|^2)^s + lambda),
/// m2 = l2 (4pi^2|xi|^2)^s / ((4pi^2|xi|^2)^s (l1+l2) + lambda).
std::pair<double, double> multiplier_m1_m2(const LameConstants& c,
                                           double lambda, const VecD& xi);

/// The Bessel-normalized resolvent symbol (1+4pi^2|xi|^2)^{-s}(M + lambda I)
/// and its inverse m1 (I - m2 xihat x xihat).
MatD bessel_normalized_symbol(const LameConstants& c, double lambda,
                              const VecD& xi);
MatD bessel_normalized_inverse(const LameConstants& c, double lambda,
                               const VecD& xi);

/// G_a(eta) = eta^s/(eta^s + a): m2 = l2/(l1+l2) G_a(|xi|^2) with
/// a = lambda / ((l1+l2)(4 pi^2)^s).
double multiplier_g_a(double eta, double s, double a);

struct MultiplierReport {
  std::string symbol_id;
  double lambda = 0.0;
  double g_a = 0.0;  // the a parameter of G_a, recorded for reference
  int j_min = 0, j_max = 0;
  struct GammaRow {
    unsigned mask = 0;  // bit a set: derivative in coordinate a
    double weighted_sup = 0.0;
    double top_octave_variation = 0.0;
    bool stable = false;
    std::vector<double> octave_sup;
  };
  std::vector<GammaRow> rows;
  bool pass = false;
};

/// Marcinkiewicz condition by central finite differences on dyadic shells:
/// for every gamma in {0,1}^d the weighted supremum
/// sup |d_gamma m(xi)| prod_j |xi_j|^{gamma_j} must be finite and stable
/// across the top two octaves.
MultiplierReport marcinkiewicz_check(
    const std::function<double(const VecD&)>& symbol, int dim,
    const std::string& symbol_id, int j_min = -4, int j_max = 10,
    int directions_per_octave = 12);

/// Convenience wrapper for m1/m2 (which = 1 or 2).
MultiplierReport marcinkiewicz_check_m(int which, const LameConstants& c,
                                       double lambda, int j_min = -4,
                                       int j_max = 10);

}  // namespace nlwave

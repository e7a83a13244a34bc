#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nlwave/field.hpp"
#include "nlwave/rng.hpp"

namespace nlwave {

/// A closed-form smooth periodic vector field: exact values anywhere, exact
/// gradient, and (when available) an exact trigonometric representation.
class SmoothVectorField {
 public:
  virtual ~SmoothVectorField() = default;
  virtual int dim() const = 0;
  virtual double length() const = 0;
  virtual VecD eval(const VecD& x) const = 0;
  /// (grad u)(x) with entries [c][j] = d u_c / d x_j.
  virtual MatD gradient(const VecD& x) const = 0;
  /// Coefficient l1 bounds, used for truncation-tail bounds.
  virtual double sup_bound() const = 0;
  virtual double grad_sup_bound() const = 0;

  VectorField sample(const GridSpec& grid) const;
};

/// Finite sum of conjugate-symmetric modes a_k e^{2 pi i k.x/L}; values real.
class TrigPolynomial final : public SmoothVectorField {
 public:
  struct Mode {
    std::array<int, 3> k{0, 0, 0};
    CVecD amp;
  };

  TrigPolynomial(int dim, double length);

  int dim() const override { return dim_; }
  double length() const override { return length_; }
  const std::vector<Mode>& modes() const { return modes_; }

  /// Adds a_k e^{2 pi i k.x/L} + its conjugate at -k (for k = 0, amp must be
  /// real and is added once).
  void add_conjugate_pair(const std::array<int, 3>& k, const CVecD& amp);

  VecD eval(const VecD& x) const override;
  MatD gradient(const VecD& x) const override;
  double sup_bound() const override;
  double grad_sup_bound() const override;

  /// Random field with modes |k|_inf <= max_mode and Gaussian amplitudes
  /// decaying like exp(-|k|^2 / (2 decay^2)).
  static TrigPolynomial random(int dim, double length, int max_mode,
                               Rng& rng, double decay = 2.5);

 private:
  int dim_;
  double length_;
  std::vector<Mode> modes_;  // one entry per conjugate pair (k lexicographic > 0)
};

/// L-periodization of a separable Gaussian bump, evaluated by image sums per
/// axis; its exact Fourier coefficients come from Poisson summation.
class PeriodizedGaussian final : public SmoothVectorField {
 public:
  PeriodizedGaussian(int dim, double length, const VecD& center, double sigma,
                     const VecD& amplitude);

  int dim() const override { return dim_; }
  double length() const override { return length_; }
  VecD eval(const VecD& x) const override;
  MatD gradient(const VecD& x) const override;
  double sup_bound() const override;
  double grad_sup_bound() const override;

  /// Exact trigonometric representation, truncated below 1e-18 relative.
  TrigPolynomial to_trig_polynomial() const;

 private:
  double axis_sum(int a, double xa) const;
  double axis_sum_derivative(int a, double xa) const;

  int dim_;
  double length_;
  VecD center_;
  double sigma_;
  VecD amplitude_;
  int images_;
};

}  // namespace nlwave

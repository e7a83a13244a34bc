#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nlwave/types.hpp"

namespace nlwave {

/// Uniform periodic grid on [0,L)^d with N (power of two) points per axis.
/// Frequencies are xi_k = k/L with integer k in [-N/2, N/2) per axis, stored
/// in DFT order (0..N/2-1, -N/2..-1).
struct GridSpec {
  int dim = 2;
  int n = 64;
  double length = 1.0;

  void validate() const;
  double spacing() const { return length / n; }
  std::int64_t num_nodes() const;
  int signed_index(int i) const { return i < n / 2 ? i : i - n; }

  std::array<int, 3> unflatten(std::int64_t node) const;
  std::int64_t flatten(const std::array<int, 3>& idx) const;
  /// Integer frequency components of the flattened mode.
  std::array<int, 3> mode_indices(std::int64_t mode) const;
  /// xi_k in cycles per unit length.
  VecD frequency(std::int64_t mode) const;
  /// Node position in [0, L)^d.
  VecD position(std::int64_t node) const;
  /// Flat index of the mode with componentwise negated frequency.
  std::int64_t conjugate_mode(std::int64_t mode) const;

  bool operator==(const GridSpec& o) const {
    return dim == o.dim && n == o.n && length == o.length;
  }
};

/// d-component real field on the grid nodes, planar component storage.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  double& operator()(int comp, std::int64_t node) {
    return data_[comp * nodes_ + node];
  }
  double operator()(int comp, std::int64_t node) const {
    return data_[comp * nodes_ + node];
  }
  VecD at(std::int64_t node) const;
  void set(std::int64_t node, const VecD& value);
  std::int64_t num_nodes() const { return nodes_; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);

  double max_abs() const;
  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw() { return data_; }

 private:
  GridSpec grid_;
  std::int64_t nodes_ = 0;
  std::vector<double> data_;
};

/// d-component complex coefficients per frequency, planar storage.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  Complex& operator()(int comp, std::int64_t mode) {
    return data_[comp * modes_ + mode];
  }
  Complex operator()(int comp, std::int64_t mode) const {
    return data_[comp * modes_ + mode];
  }
  CVecD at(std::int64_t mode) const;
  void set(std::int64_t mode, const CVecD& value);
  std::int64_t num_modes() const { return modes_; }

 private:
  GridSpec grid_;
  std::int64_t modes_ = 0;
  std::vector<Complex> data_;
};

/// Discrete analogue of the continuum transform: forward carries the cell
/// measure h^d, so coefficients approximate Fourier integrals of the
/// L-periodized field; the pair round-trips to machine precision.
SpectralField forward_transform(const VectorField& u);
VectorField inverse_transform(const SpectralField& uhat);

struct SobolevNorms {
  double l2 = 0;      // ||u||_{L^2}
  double ds = 0;      // ||D^s u||_{L^2}
  double d2s = 0;     // ||D^{2s} u||_{L^2}
  double bessel = 0;  // ||u||_{H^{2s,2}}
};
SobolevNorms sobolev_norms(const VectorField& u, double s);
SobolevNorms sobolev_norms(const SpectralField& uhat, double s);

/// (h^d sum |u(x_j)|^p)^{1/p}, Euclidean norm on components; max norm at
/// p = infinity.
double lp_norm(const VectorField& u, double p);
double l2_norm(const VectorField& u);

// Field file: plain-text header (d, N, L, components, endianness) followed by
// a raw little-endian float64 payload, node-major with components interleaved.
void write_field(const std::string& path, const VectorField& u);
VectorField read_field(const std::string& path);
void write_field_csv(const std::string& path, const VectorField& u);

}  // namespace nlwave

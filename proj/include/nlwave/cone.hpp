#pragma once

#include <optional>
#include <vector>

#include "nlwave/types.hpp"

namespace nlwave {

/// One spherical cap {nu : angle(nu, axis) <= half_angle} on S^{d-1}.
struct Cap {
  VecD axis;
  double half_angle;
};

/// Direction set Gamma of a Class B kernel, described as a finite union of
/// spherical caps (or the full sphere). All queries act on the symmetrized
/// double cone Gamma u (-Gamma).
class ConeSpec {
 public:
  static ConeSpec Full(int dim);
  static ConeSpec CapUnion(int dim, std::vector<Cap> caps);

  int dim() const { return dim_; }
  bool is_full() const { return full_; }
  const std::vector<Cap>& caps() const { return caps_; }

  /// Membership of y/|y| in Gamma u (-Gamma). Throws std::domain_error on y=0.
  bool contains(const VecD& y) const;

  /// sigma(Gamma u (-Gamma)) on S^{d-1}. Exact arc arithmetic in d=2,
  /// latitude-sweep quadrature with order doubling in d=3.
  double surface_measure() const;

  /// d=2 only: the symmetrized direction set as merged disjoint angle
  /// intervals within [0, pi) (the set is pi-periodic).
  std::vector<std::pair<double, double>> half_period_arcs() const;

  /// d=3 only: merged azimuth intervals of the symmetrized set on the
  /// latitude with polar cosine u, computed in the frame whose rows are
  /// given by `frame` (world -> frame coordinates).
  std::vector<std::pair<double, double>> azimuth_intervals(
      const MatD& frame, double u) const;

  /// d=3 only: polar-cosine values in (-1,1) where the latitude cross
  /// section changes analytic branch (cap tangencies), in frame coordinates.
  std::vector<double> latitude_breakpoints(const MatD& frame) const;

 private:
  int dim_ = 2;
  bool full_ = true;
  std::vector<Cap> caps_;
};

/// A quadrature node on the sphere.
struct AngularNode {
  VecD nu;
  double weight;
};

/// Orthonormal frame (rows) with third/second row aligned to `axis`.
MatD aligned_frame(const VecD& axis);

/// Quadrature rule over the symmetrized cone. Nodes come in exact +/- pairs,
/// so any odd integrand cancels to machine precision. If `split_dir` is
/// non-null the great circle nu . split_dir = 0 is made a panel boundary
/// (radial factors carry |nu . split_dir|^{2s} kinks there).
std::vector<AngularNode> cone_angular_rule(const ConeSpec& cone, int order,
                                           const VecD* split_dir);

}  // namespace nlwave

#include <cmath>
#include <sstream>

#include "nlwave/symbol.hpp"

namespace nlwave {

std::pair<double, double> multiplier_m1_m2(const LameConstants& c,
                                           double lambda, const VecD& xi) {
  if (!(lambda > 0)) throw std::invalid_argument("multiplier: lambda must be > 0");
  double w = 4.0 * kPi * kPi * xi.squaredNorm();
  double ws = std::pow(w, c.s);
  double m1 = std::pow(1.0 + w, c.s) / (c.l1 * ws + lambda);
  double m2 = c.l2 * ws / (ws * (c.l1 + c.l2) + lambda);
  return {m1, m2};
}

MatD bessel_normalized_symbol(const LameConstants& c, double lambda,
                              const VecD& xi) {
  const int d = c.dim;
  double w = 4.0 * kPi * kPi * xi.squaredNorm();
  MatD m = analytic_fraclame_symbol(c, xi).m.real();
  return std::pow(1.0 + w, -c.s) * (m + lambda * MatD::Identity(d, d));
}

MatD bessel_normalized_inverse(const LameConstants& c, double lambda,
                               const VecD& xi) {
  const int d = c.dim;
  auto [m1, m2] = multiplier_m1_m2(c, lambda, xi);
  MatD proj = MatD::Zero(d, d);
  double n = xi.norm();
  if (n > 0) {
    VecD xihat = xi / n;
    proj = xihat * xihat.transpose();
  }
  return m1 * (MatD::Identity(d, d) - m2 * proj);
}

double multiplier_g_a(double eta, double s, double a) {
  if (!(a > 0)) throw std::invalid_argument("multiplier_g_a: a must be > 0");
  if (!(eta > 0)) return 0.0;
  return 1.0 / (1.0 + a * std::pow(eta, -s));
}

namespace {

// Nested central differences for the mixed partial over the coordinate set
// in `mask`, relative steps anchored at the base point.
double mixed_partial(const std::function<double(const VecD&)>& f, VecD xi,
                     unsigned mask, const VecD& steps) {
  if (mask == 0) return f(xi);
  int a = 0;
  while (!(mask & (1u << a))) ++a;
  unsigned rest = mask & ~(1u << a);
  VecD up = xi, dn = xi;
  up[a] += steps[a];
  dn[a] -= steps[a];
  return (mixed_partial(f, up, rest, steps) - mixed_partial(f, dn, rest, steps)) /
         (2.0 * steps[a]);
}

}  // namespace

MultiplierReport marcinkiewicz_check(
    const std::function<double(const VecD&)>& symbol, int dim,
    const std::string& symbol_id, int j_min, int j_max,
    int directions_per_octave) {
  require_dim(dim, "marcinkiewicz_check");
  MultiplierReport rep;
  rep.symbol_id = symbol_id;
  rep.j_min = j_min;
  rep.j_max = j_max;

  // generic shell directions avoiding the coordinate planes
  std::vector<VecD> dirs;
  for (int i = 0; i < directions_per_octave; ++i) {
    VecD v(dim);
    if (dim == 2) {
      double th = kTwoPi * (i + 0.37) / directions_per_octave;
      v[0] = std::cos(th);
      v[1] = std::sin(th);
    } else {
      double u = -1.0 + 2.0 * (i + 0.45) / directions_per_octave;
      double th = kTwoPi * (i * 0.61803398875 + 0.21);
      double r = std::sqrt(std::max(1e-6, 1.0 - u * u));
      v[0] = r * std::cos(th);
      v[1] = r * std::sin(th);
      v[2] = u;
    }
    bool near_plane = false;
    for (int a = 0; a < dim; ++a) near_plane |= std::abs(v[a]) < 1e-3;
    if (!near_plane) dirs.push_back(v);
  }

  const double eps = 1e-4;
  rep.pass = true;
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    MultiplierReport::GammaRow row;
    row.mask = mask;
    row.octave_sup.assign(j_max - j_min + 1, 0.0);
    for (int j = j_min; j <= j_max; ++j) {
      double radius = std::ldexp(1.0, j);
      for (const auto& dir : dirs) {
        VecD xi = radius * dir;
        VecD steps(dim);
        for (int a = 0; a < dim; ++a) steps[a] = eps * std::abs(xi[a]);
        double der = mixed_partial(symbol, xi, mask, steps);
        if (mask != 0) {
          // step-halving consistency check
          VecD steps2 = 0.5 * steps;
          double der2 = mixed_partial(symbol, xi, mask, steps2);
          double scale = std::max(std::abs(der), std::abs(der2));
          double floor = 1e-9 * std::abs(symbol(xi));
          for (int a = 0; a < dim; ++a)
            if (mask & (1u << a)) floor /= steps[a];
          if (scale > floor && std::abs(der - der2) > 0.5 * scale) {
            std::ostringstream os;
            os << "marcinkiewicz_check(" << symbol_id
               << "): unstable finite difference for gamma mask " << mask
               << " at |xi| = " << radius;
            throw numeric_error(os.str());
          }
          der = der2;
        }
        double weighted = std::abs(der);
        for (int a = 0; a < dim; ++a)
          if (mask & (1u << a)) weighted *= std::abs(xi[a]);
        row.octave_sup[j - j_min] = std::max(row.octave_sup[j - j_min], weighted);
      }
    }
    row.weighted_sup = 0;
    for (double v : row.octave_sup) row.weighted_sup = std::max(row.weighted_sup, v);
    double top = row.octave_sup[j_max - j_min];
    double prev = row.octave_sup[j_max - 1 - j_min];
    double hi = std::max(top, prev), lo = std::min(top, prev);
    // derivative suprema may decay to the noise floor; "stable" means the
    // top octave did not grow by more than 2x
    row.top_octave_variation = lo > 0 ? hi / lo : 1.0;
    row.stable = std::isfinite(row.weighted_sup) &&
                 (top <= 2.0 * prev || top <= 1e-10 * row.weighted_sup);
    rep.pass = rep.pass && row.stable;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

MultiplierReport marcinkiewicz_check_m(int which, const LameConstants& c,
                                       double lambda, int j_min, int j_max) {
  if (which != 1 && which != 2)
    throw std::invalid_argument("marcinkiewicz_check_m: which must be 1 or 2");
  auto fn = [which, c, lambda](const VecD& xi) {
    auto [m1, m2] = multiplier_m1_m2(c, lambda, xi);
    return which == 1 ? m1 : m2;
  };
  MultiplierReport rep = marcinkiewicz_check(fn, c.dim,
                                             which == 1 ? "m1" : "m2", j_min,
                                             j_max);
  rep.lambda = lambda;
  rep.g_a = lambda / ((c.l1 + c.l2) * std::pow(4.0 * kPi * kPi, c.s));
  return rep;
}

}  // namespace nlwave

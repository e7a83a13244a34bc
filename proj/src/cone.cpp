#include "nlwave/cone.hpp"

#include <algorithm>
#include <cmath>

#include "nlwave/quadrature.hpp"

namespace nlwave {

namespace {

double wrap_angle(double a, double period) {
  a = std::fmod(a, period);
  if (a < 0) a += period;
  return a;
}

// Merge a list of (possibly wrapping) intervals into disjoint sorted pieces
// within [0, period).
std::vector<std::pair<double, double>> merge_circle_intervals(
    std::vector<std::pair<double, double>> in, double period) {
  std::vector<std::pair<double, double>> flat;
  for (auto [a, b] : in) {
    double len = b - a;
    if (len <= 0) continue;
    if (len >= period) {
      flat.emplace_back(0.0, period);
      continue;
    }
    a = wrap_angle(a, period);
    b = a + len;
    if (b <= period) {
      flat.emplace_back(a, b);
    } else {
      flat.emplace_back(a, period);
      flat.emplace_back(0.0, b - period);
    }
  }
  if (flat.empty()) return flat;
  std::sort(flat.begin(), flat.end());
  std::vector<std::pair<double, double>> out;
  out.push_back(flat[0]);
  for (size_t i = 1; i < flat.size(); ++i) {
    if (flat[i].first <= out.back().second + 1e-14)
      out.back().second = std::max(out.back().second, flat[i].second);
    else
      out.push_back(flat[i]);
  }
  // wrap-around join
  if (out.size() > 1 && out.front().first <= 1e-14 &&
      out.back().second >= period - 1e-14) {
    out.front().first = out.back().first - period;
    out.pop_back();
  }
  return out;
}

std::vector<std::pair<double, double>> clip_intervals(
    const std::vector<std::pair<double, double>>& in, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  for (auto [a, b] : in) {
    double a2 = std::max(a, lo), b2 = std::min(b, hi);
    if (b2 - a2 > 1e-15) out.emplace_back(a2, b2);
  }
  return out;
}

}  // namespace

ConeSpec ConeSpec::Full(int dim) {
  require_dim(dim, "ConeSpec");
  ConeSpec c;
  c.dim_ = dim;
  c.full_ = true;
  return c;
}

ConeSpec ConeSpec::CapUnion(int dim, std::vector<Cap> caps) {
  require_dim(dim, "ConeSpec");
  if (caps.empty()) throw config_error("ConeSpec: cap list is empty");
  for (auto& cap : caps) {
    if (cap.axis.size() != dim)
      throw config_error("ConeSpec: cap axis dimension mismatch");
    if (std::abs(cap.axis.norm() - 1.0) > 1e-12)
      throw config_error("ConeSpec: cap axis must have unit norm");
    if (!(cap.half_angle > 0.0) || cap.half_angle > kPi)
      throw config_error("ConeSpec: cap half-angle must lie in (0, pi]");
  }
  ConeSpec c;
  c.dim_ = dim;
  c.full_ = false;
  c.caps_ = std::move(caps);
  if (!(c.surface_measure() > 0.0))
    throw config_error("ConeSpec: symmetrized cone has zero surface measure");
  return c;
}

bool ConeSpec::contains(const VecD& y) const {
  double n = y.norm();
  if (n == 0.0) throw std::domain_error("ConeSpec::contains: zero vector");
  if (full_) return true;
  VecD nu = y / n;
  for (const auto& cap : caps_) {
    double c = std::cos(cap.half_angle);
    double dot = nu.dot(cap.axis);
    if (dot >= c - 1e-15 || -dot >= c - 1e-15) return true;
  }
  return false;
}

std::vector<std::pair<double, double>> ConeSpec::half_period_arcs() const {
  if (dim_ != 2) throw std::invalid_argument("half_period_arcs: d=2 only");
  if (full_) return {{0.0, kPi}};
  // The symmetrized set is pi-periodic, so each cap reduces to one interval
  // of length min(2*alpha, pi) modulo pi.
  std::vector<std::pair<double, double>> raw;
  for (const auto& cap : caps_) {
    double phi = std::atan2(cap.axis[1], cap.axis[0]);
    double len = std::min(2.0 * cap.half_angle, kPi);
    raw.emplace_back(phi - cap.half_angle, phi - cap.half_angle + len);
  }
  auto merged = merge_circle_intervals(std::move(raw), kPi);
  std::vector<std::pair<double, double>> out;
  for (auto [a, b] : merged) {
    if (a < 0) {  // wrap-around piece from the merge
      out.emplace_back(a + kPi, kPi);
      out.emplace_back(0.0, b);
    } else {
      out.emplace_back(a, b);
    }
  }
  std::sort(out.begin(), out.end());
  return clip_intervals(out, 0.0, kPi);
}

MatD aligned_frame(const VecD& axis) {
  int d = static_cast<int>(axis.size());
  VecD z = axis / axis.norm();
  MatD frame(d, d);
  if (d == 2) {
    frame.row(1) = z.transpose();
    frame(0, 0) = z[1];
    frame(0, 1) = -z[0];
    return frame;
  }
  VecD helper(3);
  helper.setZero();
  helper[std::abs(z[0]) < 0.9 ? 0 : 1] = 1.0;
  VecD x = helper - helper.dot(z) * z;
  x /= x.norm();
  VecD y(3);
  y[0] = z[1] * x[2] - z[2] * x[1];
  y[1] = z[2] * x[0] - z[0] * x[2];
  y[2] = z[0] * x[1] - z[1] * x[0];
  frame.row(0) = x.transpose();
  frame.row(1) = y.transpose();
  frame.row(2) = z.transpose();
  return frame;
}

std::vector<std::pair<double, double>> ConeSpec::azimuth_intervals(
    const MatD& frame, double u) const {
  if (dim_ != 3) throw std::invalid_argument("azimuth_intervals: d=3 only");
  if (full_) return {{0.0, kTwoPi}};
  double sin_th = std::sqrt(std::max(0.0, 1.0 - u * u));
  std::vector<std::pair<double, double>> raw;
  for (const auto& cap : caps_) {
    for (int sgn : {+1, -1}) {
      VecD a = frame * (sgn * cap.axis);
      double ct = std::clamp(a[2], -1.0, 1.0);
      double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      double denom = sin_th * st;
      double cos_alpha = std::cos(cap.half_angle);
      if (denom < 1e-14) {
        // cap axis at a pole or the latitude is a pole
        if (u * ct >= cos_alpha - 1e-14) raw.emplace_back(0.0, kTwoPi);
        continue;
      }
      double q = (cos_alpha - u * ct) / denom;
      if (q <= -1.0) {
        raw.emplace_back(0.0, kTwoPi);
      } else if (q < 1.0) {
        double psi = std::acos(q);
        double phi_a = std::atan2(a[1], a[0]);
        raw.emplace_back(phi_a - psi, phi_a + psi);
      }
    }
  }
  return merge_circle_intervals(std::move(raw), kTwoPi);
}

std::vector<double> ConeSpec::latitude_breakpoints(const MatD& frame) const {
  if (dim_ != 3) throw std::invalid_argument("latitude_breakpoints: d=3 only");
  std::vector<double> out;
  if (full_) return out;
  for (const auto& cap : caps_) {
    for (int sgn : {+1, -1}) {
      VecD a = frame * (sgn * cap.axis);
      double theta_a = std::acos(std::clamp(a[2], -1.0, 1.0));
      for (double th : {theta_a - cap.half_angle, theta_a + cap.half_angle}) {
        double uu = std::cos(std::clamp(th, 0.0, kPi));
        if (uu > -1.0 + 1e-13 && uu < 1.0 - 1e-13) out.push_back(uu);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double ConeSpec::surface_measure() const {
  if (dim_ == 2) {
    if (full_) return kTwoPi;
    double len = 0;
    for (auto [a, b] : half_period_arcs()) len += b - a;
    return 2.0 * len;
  }
  if (full_) return 4.0 * kPi;
  MatD frame = MatD::Identity(3, 3);
  auto splits = latitude_breakpoints(frame);
  std::vector<double> pts = {0.0};
  for (double u : splits)
    if (u > 1e-13) pts.push_back(u);
  pts.push_back(1.0);
  std::sort(pts.begin(), pts.end());
  auto length_at = [&](double u) {
    double len = 0;
    for (auto [a, b] : azimuth_intervals(frame, u)) len += b - a;
    return len;
  };
  double prev = 0;
  for (int order = 16; order <= 512; order *= 2) {
    double acc = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      acc += integrate_gl(length_at, pts[i], pts[i + 1], order);
    acc *= 2.0;  // lower hemisphere by symmetry of the double cone
    if (order > 16 && std::abs(acc - prev) <= 1e-10 * std::abs(acc))
      return acc;
    prev = acc;
  }
  return prev;
}

std::vector<AngularNode> cone_angular_rule(const ConeSpec& cone, int order,
                                           const VecD* split_dir) {
  std::vector<AngularNode> nodes;
  if (cone.dim() == 2) {
    auto arcs = cone.half_period_arcs();
    std::vector<double> splits;
    if (split_dir && split_dir->norm() > 0) {
      double psi = std::atan2((*split_dir)[1], (*split_dir)[0]);
      splits.push_back(wrap_angle(psi + kPi / 2, kPi));
    }
    for (auto [a, b] : arcs) {
      std::vector<double> pts = {a, b};
      for (double s : splits)
        if (s > a + 1e-14 && s < b - 1e-14) pts.push_back(s);
      std::sort(pts.begin(), pts.end());
      for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const GaussRule& r = gauss_legendre(order);
        double mid = 0.5 * (pts[i] + pts[i + 1]);
        double half = 0.5 * (pts[i + 1] - pts[i]);
        for (int k = 0; k < order; ++k) {
          double th = mid + half * r.nodes[k];
          double w = half * r.weights[k];
          VecD nu(2);
          nu[0] = std::cos(th);
          nu[1] = std::sin(th);
          nodes.push_back({nu, w});
          nodes.push_back({-nu, w});
        }
      }
    }
    return nodes;
  }

  // d = 3: latitude sweep over the upper hemisphere in a frame aligned with
  // the kink direction, antipodal images supply the lower hemisphere.
  MatD frame = split_dir && split_dir->norm() > 0 ? aligned_frame(*split_dir)
                                                  : MatD::Identity(3, 3);
  MatD back = frame.transpose();
  std::vector<double> pts = {0.0};
  for (double u : cone.latitude_breakpoints(frame))
    if (u > 1e-13 && u < 1.0 - 1e-13) pts.push_back(u);
  pts.push_back(1.0);
  std::sort(pts.begin(), pts.end());
  const GaussRule& ru = gauss_legendre(order);
  const int order_phi = std::max(8, order);
  const GaussRule& rp = gauss_legendre(order_phi);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double midu = 0.5 * (pts[i] + pts[i + 1]);
    double halfu = 0.5 * (pts[i + 1] - pts[i]);
    for (int a = 0; a < order; ++a) {
      double u = midu + halfu * ru.nodes[a];
      double wu = halfu * ru.weights[a];
      double sin_th = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (auto [p0, p1] : cone.azimuth_intervals(frame, u)) {
        bool full_circle = (p1 - p0) >= kTwoPi - 1e-12;
        int nphi = full_circle ? 2 * order_phi : order_phi;
        for (int b = 0; b < nphi; ++b) {
          double phi, wphi;
          if (full_circle) {  // periodic midpoint rule
            phi = p0 + (p1 - p0) * (b + 0.5) / nphi;
            wphi = (p1 - p0) / nphi;
          } else {
            phi = 0.5 * (p0 + p1) + 0.5 * (p1 - p0) * rp.nodes[b];
            wphi = 0.5 * (p1 - p0) * rp.weights[b];
          }
          VecD nf(3);
          nf[0] = sin_th * std::cos(phi);
          nf[1] = sin_th * std::sin(phi);
          nf[2] = u;
          VecD nu = back * nf;
          nodes.push_back({nu, wu * wphi});
          nodes.push_back({-nu, wu * wphi});
        }
      }
    }
  }
  return nodes;
}

}  // namespace nlwave

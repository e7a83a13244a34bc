#include "nlwave/kernel.hpp"

#include <cmath>
#include <sstream>

#include "nlwave/quadrature.hpp"

namespace nlwave {

DirectionWeight DirectionWeight::constant(double c) {
  DirectionWeight w;
  w.c0 = c;
  return w;
}

double DirectionWeight::operator()(const VecD& nu) const {
  if (c1 == 0.0 && c2 == 0.0) return c0;
  double t = nu.dot(axis);
  return c0 + c1 * t + c2 * t * t;
}

namespace {
std::pair<double, double> quadratic_range(double c0, double c1, double c2) {
  // range of c0 + c1 t + c2 t^2 over t in [-1,1]
  double lo = std::min(c0 + c1 + c2, c0 - c1 + c2);
  double hi = std::max(c0 + c1 + c2, c0 - c1 + c2);
  if (c2 != 0.0) {
    double tstar = -c1 / (2.0 * c2);
    if (tstar > -1.0 && tstar < 1.0) {
      double v = c0 + c1 * tstar + c2 * tstar * tstar;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}
}  // namespace

double DirectionWeight::min_value() const {
  return quadratic_range(c0, c1, c2).first;
}

double DirectionWeight::max_value() const {
  return quadratic_range(c0, c1, c2).second;
}

void SingularKernel::validate() const {
  require_dim(dim, "SingularKernel");
  if (!(s > 0.0) || !(s < 1.0))
    throw config_error("SingularKernel: s must lie in (0,1)");
  if (!(truncation > 0.0))
    throw config_error("SingularKernel: truncation radius must be positive");
  if (!(alpha1() > 0.0))
    throw config_error("SingularKernel: direction factor must be bounded away from 0");
  if (cone.dim() != dim) throw config_error("SingularKernel: cone dimension mismatch");
  if ((m.c1 != 0.0 || m.c2 != 0.0) && m.axis.size() != dim)
    throw config_error("SingularKernel: direction-weight axis dimension mismatch");
}

double SingularKernel::eval(const VecD& y) const {
  double n = y.norm();
  if (n == 0.0)
    throw std::domain_error("SingularKernel::eval: singular kernel at y = 0");
  if (n > truncation) return 0.0;
  if (!cone.contains(y)) return 0.0;
  VecD nu = y / n;
  return m(nu) * std::pow(n, -static_cast<double>(dim) - 2.0 * s);
}

void IntegrableKernel::validate() const {
  require_dim(dim, "IntegrableKernel");
  if (const auto* b = std::get_if<BallKernel>(&family)) {
    if (!(b->radius > 0)) throw config_error("BallKernel: radius must be positive");
    if (!(b->mass > 0)) throw config_error("BallKernel: mass must be positive");
  } else if (const auto* g = std::get_if<GaussianKernel>(&family)) {
    if (!(g->sigma > 0)) throw config_error("GaussianKernel: sigma must be positive");
    if (!(g->mass > 0)) throw config_error("GaussianKernel: mass must be positive");
  } else if (const auto* o = std::get_if<OffsetGaussianKernel>(&family)) {
    if (!(o->sigma > 0)) throw config_error("OffsetGaussianKernel: sigma must be positive");
    if (!(o->mass > 0)) throw config_error("OffsetGaussianKernel: mass must be positive");
    if (o->center.size() != dim)
      throw config_error("OffsetGaussianKernel: center dimension mismatch");
  } else if (const auto* c = std::get_if<ConeIndicatorKernel>(&family)) {
    if (!(c->radius > 0)) throw config_error("ConeIndicatorKernel: radius must be positive");
    if (!(c->mass > 0)) throw config_error("ConeIndicatorKernel: mass must be positive");
    if (c->cone.dim() != dim)
      throw config_error("ConeIndicatorKernel: cone dimension mismatch");
  }
}

namespace {
double ball_volume(int d, double r) {
  return d == 2 ? kPi * r * r : 4.0 / 3.0 * kPi * r * r * r;
}
double gauss_density(int d, double sigma, double dist2) {
  double norm = std::pow(kTwoPi * sigma * sigma, -0.5 * d);
  return norm * std::exp(-0.5 * dist2 / (sigma * sigma));
}
}  // namespace

double IntegrableKernel::eval(const VecD& y) const {
  if (const auto* b = std::get_if<BallKernel>(&family)) {
    if (y.norm() > b->radius) return 0.0;
    return b->mass / ball_volume(dim, b->radius);
  }
  if (const auto* g = std::get_if<GaussianKernel>(&family))
    return g->mass * gauss_density(dim, g->sigma, y.squaredNorm());
  if (const auto* o = std::get_if<OffsetGaussianKernel>(&family))
    return o->mass * gauss_density(dim, o->sigma, (y - o->center).squaredNorm());
  const auto& c = std::get<ConeIndicatorKernel>(family);
  if (y.norm() > c.radius || y.norm() == 0.0) return 0.0;
  if (!c.cone.contains(y)) return 0.0;
  double sector_volume =
      ball_volume(dim, c.radius) * c.cone.surface_measure() /
      (dim == 2 ? kTwoPi : 4.0 * kPi);
  return c.mass / sector_volume;
}

double IntegrableKernel::l1_mass() const {
  if (const auto* b = std::get_if<BallKernel>(&family)) return b->mass;
  if (const auto* g = std::get_if<GaussianKernel>(&family)) return g->mass;
  if (const auto* o = std::get_if<OffsetGaussianKernel>(&family)) return o->mass;
  return std::get<ConeIndicatorKernel>(family).mass;
}

bool IntegrableKernel::is_even() const {
  return !std::holds_alternative<OffsetGaussianKernel>(family);
}

bool IntegrableKernel::is_radial() const {
  return std::holds_alternative<BallKernel>(family) ||
         std::holds_alternative<GaussianKernel>(family);
}

double IntegrableKernel::support_radius() const {
  if (const auto* b = std::get_if<BallKernel>(&family)) return b->radius;
  if (const auto* g = std::get_if<GaussianKernel>(&family)) return 14.0 * g->sigma;
  if (const auto* o = std::get_if<OffsetGaussianKernel>(&family))
    return 14.0 * o->sigma + o->center.norm();
  return std::get<ConeIndicatorKernel>(family).radius;
}

double IntegrableKernel::radial_profile(double tau) const {
  if (const auto* b = std::get_if<BallKernel>(&family))
    return tau <= b->radius ? b->mass / ball_volume(dim, b->radius) : 0.0;
  if (const auto* g = std::get_if<GaussianKernel>(&family))
    return g->mass * gauss_density(dim, g->sigma, tau * tau);
  throw std::invalid_argument("radial_profile: kernel is not radial");
}

KernelSpec KernelSpec::integrable(IntegrableKernel k) {
  k.validate();
  KernelSpec spec;
  spec.kind_ = Kind::Integrable;
  spec.integrable_ = std::move(k);
  return spec;
}

KernelSpec KernelSpec::singular(SingularKernel k) {
  k.validate();
  KernelSpec spec;
  spec.kind_ = Kind::Singular;
  spec.singular_ = std::move(k);
  return spec;
}

const IntegrableKernel& KernelSpec::as_integrable() const {
  if (!is_integrable())
    throw std::invalid_argument("KernelSpec: not an integrable kernel");
  return integrable_;
}

const SingularKernel& KernelSpec::as_singular() const {
  if (!is_singular())
    throw std::invalid_argument("KernelSpec: not a singular kernel");
  return singular_;
}

int KernelSpec::dim() const {
  return is_integrable() ? integrable_.dim : singular_.dim;
}

double KernelSpec::eval(const VecD& y) const {
  return is_integrable() ? integrable_.eval(y) : singular_.eval(y);
}

bool KernelSpec::is_even() const {
  return is_integrable() ? integrable_.is_even() : singular_.is_even();
}

Compensator::Case Compensator::rule() const {
  if (s < 0.5) return Case::Zero;
  if (s > 0.5) return Case::One;
  return Case::UnitBall;
}

double Compensator::operator()(const VecD& y) const {
  switch (rule()) {
    case Case::Zero: return 0.0;
    case Case::One: return 1.0;
    case Case::UnitBall: return y.norm() <= 1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

Compensator Compensator::for_kernel(const KernelSpec& k) {
  if (k.is_integrable()) return Compensator{0.25};  // any s < 1/2: chi = 0
  return Compensator{k.as_singular().s};
}

void HomotopyKernel::validate() const {
  base.validate();
  if (t < 0.0 || t > 1.0) throw config_error("HomotopyKernel: t must lie in [0,1]");
}

double HomotopyKernel::eval(const VecD& y) const {
  double n = y.norm();
  if (n == 0.0)
    throw std::domain_error("HomotopyKernel::eval: singular kernel at y = 0");
  double frac = base.alpha1() *
                std::pow(n, -static_cast<double>(base.dim) - 2.0 * base.s);
  return t * base.eval(y) + (1.0 - t) * frac;
}

double ModifiedKernel::eval(const VecD& y) const {
  double n = y.norm();
  double val = h.eval(y);
  const SingularKernel& b = h.base;
  if (n > b.truncation && b.cone.contains(y))
    val += h.t * b.alpha1() *
           std::pow(n, -static_cast<double>(b.dim) - 2.0 * b.s);
  return val;
}

ModifiedKernel modified_kernel(const HomotopyKernel& h) {
  h.validate();
  return ModifiedKernel{h};
}

CancellationReport check_cancellation(const SingularKernel& k,
                                      const std::vector<double>& radii,
                                      int quad_order) {
  k.validate();
  if (radii.empty())
    throw std::invalid_argument("check_cancellation: no radii given");
  const int d = k.dim;
  CancellationReport rep;
  rep.pass = true;

  // int_{dB_mu} y_i y_j y_k rho dsigma = mu^{2-2s} int_{cone} nu_i nu_j nu_k
  // m(nu) dsigma(nu) whenever mu <= r, so the normalized moment is the
  // direction integral divided by alpha2.
  auto moment = [&](int order, int i, int j, int kk) {
    auto rule = cone_angular_rule(k.cone, order, nullptr);
    double acc = 0;
    for (const auto& node : rule)
      acc += node.weight * node.nu[i] * node.nu[j] * node.nu[kk] * k.m(node.nu);
    return acc;
  };

  for (double mu : radii) {
    if (!(mu > 0)) throw std::invalid_argument("check_cancellation: mu <= 0");
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        for (int kk = j; kk < d; ++kk) {
          double value = 0.0;
          if (mu <= k.truncation) {
            double prev = moment(quad_order, i, j, kk);
            double curr = moment(2 * quad_order, i, j, kk);
            if (std::abs(curr - prev) > 1e-10 * (1.0 + std::abs(curr))) {
              double next = moment(4 * quad_order, i, j, kk);
              if (std::abs(next - curr) > 1e-10 * (1.0 + std::abs(next))) {
                std::ostringstream os;
                os << "check_cancellation: surface quadrature did not converge"
                   << " at (i,j,k)=(" << i << "," << j << "," << kk
                   << "), mu=" << mu;
                throw numeric_error(os.str());
              }
              curr = next;
            }
            value = std::abs(curr) / k.alpha2();
          }
          if (value > rep.max_normalized_moment) {
            rep.max_normalized_moment = value;
            rep.worst_radius = mu;
            rep.worst_i = i;
            rep.worst_j = j;
            rep.worst_k = kk;
          }
        }
  }
  rep.pass = rep.max_normalized_moment < 1e-8;
  return rep;
}

N2Result n2_constant(const SingularKernel& k) {
  k.validate();
  if (std::isinf(k.truncation)) return {0.0, true};
  double sigma = k.cone.surface_measure();
  double value = (1.0 + k.alpha1()) / k.s * sigma *
                 std::pow(k.truncation, -2.0 * k.s);
  return {value, false};
}

}  // namespace nlwave

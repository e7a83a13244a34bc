#include "nlwave/smooth_field.hpp"

#include <cmath>

namespace nlwave {

VectorField SmoothVectorField::sample(const GridSpec& grid) const {
  if (grid.dim != dim())
    throw std::invalid_argument("SmoothVectorField::sample: dimension mismatch");
  VectorField out(grid);
  for (std::int64_t j = 0; j < out.num_nodes(); ++j)
    out.set(j, eval(grid.position(j)));
  return out;
}

TrigPolynomial::TrigPolynomial(int dim, double length)
    : dim_(dim), length_(length) {
  require_dim(dim, "TrigPolynomial");
  if (!(length > 0)) throw config_error("TrigPolynomial: length must be positive");
}

void TrigPolynomial::add_conjugate_pair(const std::array<int, 3>& k,
                                        const CVecD& amp) {
  bool zero = true;
  for (int a = 0; a < dim_; ++a) zero = zero && k[a] == 0;
  if (zero) {
    for (int c = 0; c < dim_; ++c)
      if (std::abs(amp[c].imag()) > 1e-15 * std::abs(amp[c].real()) + 1e-300)
        throw std::invalid_argument("TrigPolynomial: k=0 amplitude must be real");
  }
  Mode m;
  m.k = k;
  m.amp = amp;
  modes_.push_back(std::move(m));
}

VecD TrigPolynomial::eval(const VecD& x) const {
  CVecD acc = CVecD::Zero(dim_);
  for (const auto& m : modes_) {
    double phase = 0;
    for (int a = 0; a < dim_; ++a) phase += m.k[a] * x[a];
    phase *= kTwoPi / length_;
    Complex e(std::cos(phase), std::sin(phase));
    bool zero = true;
    for (int a = 0; a < dim_; ++a) zero = zero && m.k[a] == 0;
    acc += zero ? m.amp : (m.amp * e + (m.amp * e).conjugate());
  }
  return acc.real();
}

MatD TrigPolynomial::gradient(const VecD& x) const {
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3> acc =
      CMatD::Zero(dim_, dim_);
  for (const auto& m : modes_) {
    double phase = 0;
    for (int a = 0; a < dim_; ++a) phase += m.k[a] * x[a];
    phase *= kTwoPi / length_;
    Complex e(std::cos(phase), std::sin(phase));
    CVecD freq(dim_);
    for (int a = 0; a < dim_; ++a)
      freq[a] = Complex(0, kTwoPi * m.k[a] / length_);
    CMatD term = (m.amp * e) * freq.transpose();
    acc += term + term.conjugate();
  }
  return acc.real();
}

double TrigPolynomial::sup_bound() const {
  double b = 0;
  for (const auto& m : modes_) b += 2.0 * m.amp.norm();
  return b;
}

double TrigPolynomial::grad_sup_bound() const {
  double b = 0;
  for (const auto& m : modes_) {
    double kn = 0;
    for (int a = 0; a < dim_; ++a) kn += static_cast<double>(m.k[a]) * m.k[a];
    b += 2.0 * m.amp.norm() * kTwoPi * std::sqrt(kn) / length_;
  }
  return b;
}

TrigPolynomial TrigPolynomial::random(int dim, double length, int max_mode,
                                      Rng& rng, double decay) {
  TrigPolynomial p(dim, length);
  std::array<int, 3> k{0, 0, 0};
  auto lex_positive = [&](const std::array<int, 3>& kk) {
    for (int a = 0; a < dim; ++a) {
      if (kk[a] > 0) return true;
      if (kk[a] < 0) return false;
    }
    return false;  // zero
  };
  int lo = -max_mode, hi = max_mode;
  for (k[0] = lo; k[0] <= hi; ++k[0])
    for (k[1] = lo; k[1] <= hi; ++k[1])
      for (k[2] = (dim == 3 ? lo : 0); k[2] <= (dim == 3 ? hi : 0); ++k[2]) {
        if (!lex_positive(k)) continue;  // one representative per pair
        double k2 = 0;
        for (int a = 0; a < dim; ++a) k2 += static_cast<double>(k[a]) * k[a];
        double w = std::exp(-0.5 * k2 / (decay * decay));
        CVecD amp(dim);
        for (int c = 0; c < dim; ++c)
          amp[c] = 0.5 * w * Complex(rng.normal(), rng.normal());
        p.add_conjugate_pair(k, amp);
      }
  return p;
}

PeriodizedGaussian::PeriodizedGaussian(int dim, double length,
                                       const VecD& center, double sigma,
                                       const VecD& amplitude)
    : dim_(dim),
      length_(length),
      center_(center),
      sigma_(sigma),
      amplitude_(amplitude) {
  require_dim(dim, "PeriodizedGaussian");
  if (!(sigma > 0)) throw config_error("PeriodizedGaussian: sigma must be positive");
  if (!(length > 0)) throw config_error("PeriodizedGaussian: length must be positive");
  images_ = static_cast<int>(std::ceil(13.0 * sigma / length)) + 1;
}

double PeriodizedGaussian::axis_sum(int a, double xa) const {
  double acc = 0;
  for (int n = -images_; n <= images_; ++n) {
    double t = xa - center_[a] + n * length_;
    acc += std::exp(-0.5 * t * t / (sigma_ * sigma_));
  }
  return acc;
}

double PeriodizedGaussian::axis_sum_derivative(int a, double xa) const {
  double acc = 0;
  for (int n = -images_; n <= images_; ++n) {
    double t = xa - center_[a] + n * length_;
    acc += -t / (sigma_ * sigma_) * std::exp(-0.5 * t * t / (sigma_ * sigma_));
  }
  return acc;
}

VecD PeriodizedGaussian::eval(const VecD& x) const {
  double prod = 1.0;
  for (int a = 0; a < dim_; ++a) prod *= axis_sum(a, x[a]);
  return amplitude_ * prod;
}

MatD PeriodizedGaussian::gradient(const VecD& x) const {
  // grad (A * prod_a S_a) : column j scales by S'_j / S_j
  std::array<double, 3> s{1, 1, 1}, ds{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    s[a] = axis_sum(a, x[a]);
    ds[a] = axis_sum_derivative(a, x[a]);
  }
  double prod = 1.0;
  for (int a = 0; a < dim_; ++a) prod *= s[a];
  MatD g(dim_, dim_);
  for (int c = 0; c < dim_; ++c)
    for (int j = 0; j < dim_; ++j)
      g(c, j) = amplitude_[c] * prod * (s[j] != 0.0 ? ds[j] / s[j] : 0.0);
  return g;
}

double PeriodizedGaussian::sup_bound() const {
  // the axis sum is maximized at the center
  double peak = 1.0;
  for (int a = 0; a < dim_; ++a) peak *= axis_sum(a, center_[a]);
  return amplitude_.norm() * peak;
}

double PeriodizedGaussian::grad_sup_bound() const {
  // |S'| <= S_max / (sigma sqrt(e)) per axis; coarse but rigorous enough
  double peak = sup_bound();
  return peak * dim_ / (sigma_ * std::sqrt(std::exp(1.0) / 2.0));
}

TrigPolynomial PeriodizedGaussian::to_trig_polynomial() const {
  // Poisson summation: coefficient at k is
  //   (A / L^d) (2 pi sigma^2)^{d/2} exp(-2 pi^2 sigma^2 |k|^2 / L^2)
  //   exp(-2 pi i k.center / L)
  TrigPolynomial p(dim_, length_);
  double beta = 2.0 * kPi * kPi * sigma_ * sigma_ / (length_ * length_);
  int K = 1;
  while (beta * K * K < 42.0) ++K;
  double base = std::pow(kTwoPi * sigma_ * sigma_, 0.5 * dim_) /
                std::pow(length_, dim_);
  std::array<int, 3> k{0, 0, 0};
  auto lex_nonneg = [&](const std::array<int, 3>& kk) {
    for (int a = 0; a < dim_; ++a) {
      if (kk[a] > 0) return true;
      if (kk[a] < 0) return false;
    }
    return true;  // zero mode included once
  };
  for (k[0] = -K; k[0] <= K; ++k[0])
    for (k[1] = -K; k[1] <= K; ++k[1])
      for (k[2] = (dim_ == 3 ? -K : 0); k[2] <= (dim_ == 3 ? K : 0); ++k[2]) {
        if (!lex_nonneg(k)) continue;
        double k2 = 0, phase = 0;
        for (int a = 0; a < dim_; ++a) {
          k2 += static_cast<double>(k[a]) * k[a];
          phase -= kTwoPi * k[a] * center_[a] / length_;
        }
        double w = base * std::exp(-beta * k2);
        if (w < 1e-18 * base) continue;
        Complex e(std::cos(phase), std::sin(phase));
        CVecD amp(dim_);
        bool zero = true;
        for (int a = 0; a < dim_; ++a) zero = zero && k[a] == 0;
        for (int c = 0; c < dim_; ++c) amp[c] = amplitude_[c] * w * e;
        p.add_conjugate_pair(k, amp);
        (void)zero;
      }
  return p;
}

}  // namespace nlwave

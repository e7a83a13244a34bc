#include "nlwave/field.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace nlwave {

void GridSpec::validate() const {
  require_dim(dim, "GridSpec");
  if (n < 8) throw config_error("GridSpec: N must be at least 8");
  if ((n & (n - 1)) != 0) throw config_error("GridSpec: N must be a power of two");
  if (!(length > 0)) throw config_error("GridSpec: L must be positive");
}

std::int64_t GridSpec::num_nodes() const {
  std::int64_t total = 1;
  for (int a = 0; a < dim; ++a) total *= n;
  return total;
}

std::array<int, 3> GridSpec::unflatten(std::int64_t node) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(node % n);
    node /= n;
  }
  return idx;
}

std::int64_t GridSpec::flatten(const std::array<int, 3>& idx) const {
  std::int64_t node = 0;
  for (int a = 0; a < dim; ++a) node = node * n + idx[a];
  return node;
}

std::array<int, 3> GridSpec::mode_indices(std::int64_t mode) const {
  auto idx = unflatten(mode);
  for (int a = 0; a < dim; ++a) idx[a] = signed_index(idx[a]);
  return idx;
}

VecD GridSpec::frequency(std::int64_t mode) const {
  auto k = mode_indices(mode);
  VecD xi(dim);
  for (int a = 0; a < dim; ++a) xi[a] = k[a] / length;
  return xi;
}

VecD GridSpec::position(std::int64_t node) const {
  auto idx = unflatten(node);
  VecD x(dim);
  for (int a = 0; a < dim; ++a) x[a] = idx[a] * spacing();
  return x;
}

std::int64_t GridSpec::conjugate_mode(std::int64_t mode) const {
  auto idx = unflatten(mode);
  std::array<int, 3> neg{0, 0, 0};
  for (int a = 0; a < dim; ++a) neg[a] = (n - idx[a]) % n;
  return flatten(neg);
}

VectorField::VectorField(const GridSpec& grid) : grid_(grid) {
  grid.validate();
  nodes_ = grid.num_nodes();
  data_.assign(static_cast<size_t>(grid.dim) * nodes_, 0.0);
}

VecD VectorField::at(std::int64_t node) const {
  VecD v(grid_.dim);
  for (int c = 0; c < grid_.dim; ++c) v[c] = (*this)(c, node);
  return v;
}

void VectorField::set(std::int64_t node, const VecD& value) {
  for (int c = 0; c < grid_.dim; ++c) (*this)(c, node) = value[c];
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("VectorField: grid mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("VectorField: grid mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

VectorField& VectorField::operator*=(double a) {
  for (double& v : data_) v *= a;
  return *this;
}

double VectorField::max_abs() const {
  double m = 0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

SpectralField::SpectralField(const GridSpec& grid) : grid_(grid) {
  grid.validate();
  modes_ = grid.num_nodes();
  data_.assign(static_cast<size_t>(grid.dim) * modes_, Complex(0, 0));
}

CVecD SpectralField::at(std::int64_t mode) const {
  CVecD v(grid_.dim);
  for (int c = 0; c < grid_.dim; ++c) v[c] = (*this)(c, mode);
  return v;
}

void SpectralField::set(std::int64_t mode, const CVecD& value) {
  for (int c = 0; c < grid_.dim; ++c) (*this)(c, mode) = value[c];
}

namespace {

// One cached FFTW plan + buffer per (dim, n, sign).
struct PlanEntry {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
  std::int64_t size = 0;
};

PlanEntry& cached_plan(const GridSpec& g, int sign) {
  static std::map<std::tuple<int, int, int>, PlanEntry> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(g.dim, g.n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  PlanEntry e;
  e.size = g.num_nodes();
  e.buf = fftw_alloc_complex(static_cast<size_t>(e.size));
  int dims[3] = {g.n, g.n, g.n};
  e.plan = fftw_plan_dft(g.dim, dims, e.buf, e.buf, sign, FFTW_ESTIMATE);
  return cache.emplace(key, e).first->second;
}

}  // namespace

SpectralField forward_transform(const VectorField& u) {
  const GridSpec& g = u.grid();
  SpectralField out(g);
  PlanEntry& e = cached_plan(g, FFTW_FORWARD);
  const double scale = std::pow(g.spacing(), g.dim);
  for (int c = 0; c < g.dim; ++c) {
    for (std::int64_t j = 0; j < e.size; ++j) {
      e.buf[j][0] = u(c, j);
      e.buf[j][1] = 0.0;
    }
    fftw_execute(e.plan);
    for (std::int64_t j = 0; j < e.size; ++j)
      out(c, j) = Complex(e.buf[j][0] * scale, e.buf[j][1] * scale);
  }
  return out;
}

VectorField inverse_transform(const SpectralField& uhat) {
  const GridSpec& g = uhat.grid();
  VectorField out(g);
  PlanEntry& e = cached_plan(g, FFTW_BACKWARD);
  const double scale = 1.0 / std::pow(g.length, g.dim);
  for (int c = 0; c < g.dim; ++c) {
    for (std::int64_t j = 0; j < e.size; ++j) {
      e.buf[j][0] = uhat(c, j).real();
      e.buf[j][1] = uhat(c, j).imag();
    }
    fftw_execute(e.plan);
    for (std::int64_t j = 0; j < e.size; ++j) out(c, j) = e.buf[j][0] * scale;
  }
  return out;
}

SobolevNorms sobolev_norms(const SpectralField& uhat, double s) {
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("sobolev_norms: s must lie in (0,1)");
  const GridSpec& g = uhat.grid();
  double l2 = 0, ds = 0, d2s = 0, bessel = 0;
  for (std::int64_t m = 0; m < uhat.num_modes(); ++m) {
    double a2 = 0;
    for (int c = 0; c < g.dim; ++c) a2 += std::norm(uhat(c, m));
    double xi2 = uhat.grid().frequency(m).squaredNorm();
    double homog = std::pow(kTwoPi * kTwoPi * xi2, s);  // (2 pi |xi|)^{2s}
    double bweight = std::pow(1.0 + 4.0 * kPi * kPi * xi2, s);
    l2 += a2;
    ds += homog * a2;
    d2s += homog * homog * a2;
    bessel += bweight * bweight * a2;
  }
  const double vol = std::pow(g.length, -g.dim);
  SobolevNorms n;
  n.l2 = std::sqrt(vol * l2);
  n.ds = std::sqrt(vol * ds);
  n.d2s = std::sqrt(vol * d2s);
  n.bessel = std::sqrt(vol * bessel);
  return n;
}

SobolevNorms sobolev_norms(const VectorField& u, double s) {
  return sobolev_norms(forward_transform(u), s);
}

double lp_norm(const VectorField& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const GridSpec& g = u.grid();
  if (std::isinf(p)) {
    double m = 0;
    for (std::int64_t j = 0; j < u.num_nodes(); ++j)
      m = std::max(m, u.at(j).norm());
    return m;
  }
  double acc = 0;
  for (std::int64_t j = 0; j < u.num_nodes(); ++j)
    acc += std::pow(u.at(j).norm(), p);
  return std::pow(std::pow(g.spacing(), g.dim) * acc, 1.0 / p);
}

double l2_norm(const VectorField& u) { return lp_norm(u, 2.0); }

void write_field(const std::string& path, const VectorField& u) {
  static_assert(std::endian::native == std::endian::little,
                "field files are little-endian");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  const GridSpec& g = u.grid();
  os << "nlwave-field 1\n"
     << "d " << g.dim << "\n"
     << "N " << g.n << "\n";
  char lbuf[64];
  std::snprintf(lbuf, sizeof lbuf, "%.17g", g.length);
  os << "L " << lbuf << "\n"
     << "components " << g.dim << "\n"
     << "endianness little\n"
     << "data\n";
  std::vector<double> row(g.dim);
  for (std::int64_t j = 0; j < u.num_nodes(); ++j) {
    for (int c = 0; c < g.dim; ++c) row[c] = u(c, j);
    os.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(sizeof(double) * row.size()));
  }
}

VectorField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  std::string line, magic;
  std::getline(is, magic);
  if (magic.rfind("nlwave-field", 0) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  GridSpec g;
  int components = 0;
  while (std::getline(is, line)) {
    if (line == "data") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "d") ls >> g.dim;
    else if (key == "N") ls >> g.n;
    else if (key == "L") ls >> g.length;
    else if (key == "components") ls >> components;
    else if (key == "endianness") {
      std::string e;
      ls >> e;
      if (e != "little") throw std::runtime_error("read_field: unsupported endianness");
    }
  }
  g.validate();
  if (components != g.dim)
    throw std::runtime_error("read_field: component count mismatch");
  VectorField u(g);
  std::vector<double> row(g.dim);
  for (std::int64_t j = 0; j < u.num_nodes(); ++j) {
    is.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(sizeof(double) * row.size()));
    if (!is) throw std::runtime_error("read_field: truncated payload in " + path);
    for (int c = 0; c < g.dim; ++c) u(c, j) = row[c];
  }
  return u;
}

void write_field_csv(const std::string& path, const VectorField& u) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
  const GridSpec& g = u.grid();
  os << "x0";
  for (int a = 1; a < g.dim; ++a) os << ",x" << a;
  for (int c = 0; c < g.dim; ++c) os << ",u" << c;
  os << "\n";
  char buf[32];
  for (std::int64_t j = 0; j < u.num_nodes(); ++j) {
    VecD x = g.position(j);
    for (int a = 0; a < g.dim; ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", x[a]);
      os << (a ? "," : "") << buf;
    }
    for (int c = 0; c < g.dim; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", u(c, j));
      os << "," << buf;
    }
    os << "\n";
  }
}

}  // namespace nlwave

#include "nlwave/wave.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nlwave/quadrature.hpp"
#include "nlwave/solver.hpp"

namespace nlwave {

namespace {

// stable sin(w t)/w and (1 - cos(w t))/w^2 with w >= 0
double sinc_over(double w, double t) {
  double wt = w * t;
  if (std::abs(wt) < 1e-5) return t * (1.0 - wt * wt / 6.0);
  return std::sin(wt) / w;
}

double one_minus_cos_over_sq(double w, double t) {
  double wt = w * t;
  if (std::abs(wt) < 1e-5) return 0.5 * t * t * (1.0 - wt * wt / 12.0);
  return one_minus_cos(wt) / (w * w);
}

}  // namespace

WavePropagator::WavePropagator(const OperatorHandle& op) : op_(op) {
  if (!op.kernel().is_even())
    throw std::invalid_argument("WavePropagator: kernel must be even");
  const GridSpec& g = op.grid();
  const int d = g.dim;
  const std::int64_t modes = g.num_nodes();
  q_.resize(modes);
  eig_.resize(modes);
  for (std::int64_t m = 0; m < modes; ++m) {
    MatD A = op.table().at(m).real() + op.lambda() * MatD::Identity(d, d);
    Eigen::SelfAdjointEigenSolver<MatD> es(A);
    VecD vals = es.eigenvalues();
    for (int i = 0; i < d; ++i) {
      if (vals[i] < -1e-10 * (std::abs(vals[d - 1]) + 1.0)) {
        auto k = g.mode_indices(m);
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "WavePropagator: symbol not PSD at mode (%d,%d,%d)",
                      k[0], k[1], g.dim == 3 ? k[2] : 0);
        throw numeric_error(buf);
      }
      vals[i] = std::max(vals[i], 0.0);
      max_eig_ = std::max(max_eig_, vals[i]);
    }
    q_[m] = es.eigenvectors();
    eig_[m] = vals;
  }
}

std::vector<WaveState> WavePropagator::propagate_exact(
    const VectorField& u0, const VectorField& v0, const Forcing& forcing,
    const std::vector<double>& times) const {
  const GridSpec& g = op_.grid();
  if (!(u0.grid() == g) || !(v0.grid() == g))
    throw std::invalid_argument("propagate_exact: grid mismatch");
  const int d = g.dim;
  SpectralField uh = forward_transform(u0);
  SpectralField vh = forward_transform(v0);
  SpectralField fh(g);
  bool constant_forcing = forcing.kind == Forcing::Kind::Constant;
  if (constant_forcing) fh = forward_transform(forcing.f0);

  // forcing breakpoints for the piecewise-constant series
  std::vector<double> breaks;
  std::vector<SpectralField> fseg;
  if (forcing.kind == Forcing::Kind::TimeSeries) {
    if (forcing.series.empty())
      throw std::invalid_argument("propagate_exact: empty forcing series");
    for (const auto& [t, f] : forcing.series) {
      breaks.push_back(t);
      fseg.push_back(forward_transform(f));
    }
  }

  std::vector<WaveState> out;
  out.reserve(times.size());

  // advance one mode's eigencoordinates (a, adot) from ta to tb with
  // constant eigen-forcing phi and frequency squared mu
  auto advance = [&](double mu, Complex& a, Complex& adot, Complex phi,
                     double dt) {
    double w = std::sqrt(mu);
    Complex ap = mu > 0 ? phi / mu : Complex(0, 0);
    Complex ca = a - ap;
    double cw = std::cos(w * dt), sw_w = sinc_over(w, dt);
    Complex na, nd;
    if (mu > 0) {
      na = ca * cw + adot * sw_w + ap;
      nd = -ca * w * std::sin(w * dt) + adot * cw;
    } else {
      na = a + adot * dt + 0.5 * phi * dt * dt;
      nd = adot + phi * dt;
    }
    a = na;
    adot = nd;
  };

  SpectralField cur_u = uh, cur_v = vh;
  double cur_t = 0.0;
  size_t seg = 0;

  for (double t : times) {
    if (t < cur_t - 1e-14)
      throw std::invalid_argument("propagate_exact: times must be ascending");
    if (forcing.kind != Forcing::Kind::TimeSeries) {
      // single closed-form jump from the initial data
      SpectralField ut(g), vt(g);
      for (std::int64_t m = 0; m < g.num_nodes(); ++m) {
        CVecD alpha = q_[m].transpose().cast<Complex>() * uh.at(m);
        CVecD beta = q_[m].transpose().cast<Complex>() * vh.at(m);
        CVecD phi = CVecD::Zero(d);
        if (constant_forcing)
          phi = q_[m].transpose().cast<Complex>() * fh.at(m);
        CVecD na(d), nv(d);
        for (int i = 0; i < d; ++i) {
          double mu = eig_[m][i];
          double w = std::sqrt(mu);
          if (mu > 0) {
            Complex ap = phi[i] / mu;
            na[i] = (alpha[i] - ap) * std::cos(w * t) +
                    beta[i] * sinc_over(w, t) + ap;
            nv[i] = -(alpha[i] - ap) * w * std::sin(w * t) +
                    beta[i] * std::cos(w * t);
          } else {
            na[i] = alpha[i] + beta[i] * t + 0.5 * phi[i] * t * t;
            nv[i] = beta[i] + phi[i] * t;
          }
        }
        ut.set(m, q_[m].cast<Complex>() * na);
        vt.set(m, q_[m].cast<Complex>() * nv);
      }
      out.push_back({t, inverse_transform(ut), inverse_transform(vt)});
      continue;
    }
    // piecewise-constant series: step segment boundaries up to t
    while (seg + 1 < breaks.size() && breaks[seg + 1] <= t) {
      double tb = breaks[seg + 1];
      for (std::int64_t m = 0; m < g.num_nodes(); ++m) {
        CVecD a = q_[m].transpose().cast<Complex>() * cur_u.at(m);
        CVecD ad = q_[m].transpose().cast<Complex>() * cur_v.at(m);
        CVecD phi = q_[m].transpose().cast<Complex>() * fseg[seg].at(m);
        for (int i = 0; i < d; ++i)
          advance(eig_[m][i], a[i], ad[i], phi[i], tb - cur_t);
        cur_u.set(m, q_[m].cast<Complex>() * a);
        cur_v.set(m, q_[m].cast<Complex>() * ad);
      }
      cur_t = tb;
      ++seg;
    }
    SpectralField ut = cur_u, vt = cur_v;
    for (std::int64_t m = 0; m < g.num_nodes(); ++m) {
      CVecD a = q_[m].transpose().cast<Complex>() * cur_u.at(m);
      CVecD ad = q_[m].transpose().cast<Complex>() * cur_v.at(m);
      CVecD phi = q_[m].transpose().cast<Complex>() * fseg[seg].at(m);
      for (int i = 0; i < d; ++i)
        advance(eig_[m][i], a[i], ad[i], phi[i], t - cur_t);
      ut.set(m, q_[m].cast<Complex>() * a);
      vt.set(m, q_[m].cast<Complex>() * ad);
    }
    out.push_back({t, inverse_transform(ut), inverse_transform(vt)});
  }
  return out;
}

std::vector<WaveState> WavePropagator::propagate_leapfrog(
    const VectorField& u0, const VectorField& v0, const Forcing& forcing,
    double T, int steps, int outputs) const {
  const GridSpec& g = op_.grid();
  if (!(u0.grid() == g) || !(v0.grid() == g))
    throw std::invalid_argument("propagate_leapfrog: grid mismatch");
  if (steps <= 0 || outputs <= 0 || steps % outputs != 0)
    throw config_error("propagate_leapfrog: steps must be a positive multiple of outputs");
  const double dt = T / steps;
  if (dt * dt * max_eig_ > 4.0)
    throw config_error("propagate_leapfrog: CFL violated (dt^2 max_eig > 4)");
  const int d = g.dim;

  SpectralField uh = forward_transform(u0);
  SpectralField vh = forward_transform(v0);
  SpectralField fh(g);
  if (forcing.kind == Forcing::Kind::Constant) fh = forward_transform(forcing.f0);

  auto forcing_at = [&](double t) -> const SpectralField& {
    (void)t;
    return fh;  // Zero and Constant both use fh (zero-initialized for Zero)
  };
  if (forcing.kind == Forcing::Kind::TimeSeries)
    throw std::invalid_argument(
        "propagate_leapfrog: time series forcing not supported; use the exact stepper");

  std::vector<WaveState> out;
  out.reserve(outputs + 1);
  out.push_back({0.0, u0, v0});

  // accel(m) = fhat - A uhat per mode
  auto accel = [&](const SpectralField& u, double t, SpectralField& acc) {
    const SpectralField& f = forcing_at(t);
    for (std::int64_t m = 0; m < g.num_nodes(); ++m) {
      CMatD A = op_.table().at(m).real().cast<Complex>() +
                op_.lambda() * CMatD::Identity(d, d);
      acc.set(m, f.at(m) - A * u.at(m));
    }
  };

  SpectralField acc(g);
  accel(uh, 0.0, acc);
  const int stride = steps / outputs;
  for (int n = 0; n < steps; ++n) {
    double t = n * dt;
    // kick-drift-kick
    for (std::int64_t m = 0; m < g.num_nodes(); ++m) {
      vh.set(m, vh.at(m) + 0.5 * dt * acc.at(m));
      uh.set(m, uh.at(m) + dt * vh.at(m));
    }
    accel(uh, t + dt, acc);
    for (std::int64_t m = 0; m < g.num_nodes(); ++m)
      vh.set(m, vh.at(m) + 0.5 * dt * acc.at(m));
    if ((n + 1) % stride == 0)
      out.push_back({(n + 1) * dt, inverse_transform(uh), inverse_transform(vh)});
  }
  return out;
}

std::vector<WaveState> propagate(const OperatorHandle& op,
                                 const VectorField& u0, const VectorField& v0,
                                 const Forcing& forcing, double T,
                                 StepperKind stepper, double dt, int outputs) {
  WavePropagator prop(op);
  if (stepper == StepperKind::Exact) {
    std::vector<double> times;
    for (int i = 0; i <= outputs; ++i) times.push_back(T * i / outputs);
    return prop.propagate_exact(u0, v0, forcing, times);
  }
  if (!(dt > 0)) throw config_error("propagate: leapfrog requires dt > 0");
  int steps = static_cast<int>(std::round(T / dt));
  steps = std::max(steps, outputs);
  steps = ((steps + outputs - 1) / outputs) * outputs;  // divisible
  return prop.propagate_leapfrog(u0, v0, forcing, T, steps, outputs);
}

double EnergyLedger::max_relative_drift() const {
  if (rows.empty()) return 0;
  double e0 = rows.front().total;
  double scale = std::abs(e0);
  for (const auto& r : rows) scale = std::max(scale, std::abs(r.total));
  if (scale == 0) return 0;
  double drift = 0;
  for (const auto& r : rows) drift = std::max(drift, std::abs(r.total - e0));
  return drift / scale;
}

void EnergyLedger::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("EnergyLedger::write_csv: cannot open " + path);
  os << "t,kinetic,elastic,mass,forcing,total\n";
  char buf[64];
  for (const auto& r : rows) {
    bool first = true;
    for (double v : {r.t, r.kinetic, r.elastic, r.mass, r.forcing, r.total}) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << (first ? "" : ",") << buf;
      first = false;
    }
    os << "\n";
  }
}

EnergyLedger energy_ledger(const std::vector<WaveState>& traj,
                           const OperatorHandle& op, const Forcing& forcing) {
  if (forcing.kind == Forcing::Kind::TimeSeries)
    throw std::invalid_argument(
        "energy_ledger: conservation law requires constant-in-time forcing");
  EnergyLedger ledger;
  for (const auto& st : traj) {
    EnergyLedger::Row row;
    row.t = st.t;
    double kn = l2_norm(st.v);
    row.kinetic = kn * kn;
    row.elastic = bilinear_energy(op, st.u);
    double un = l2_norm(st.u);
    row.mass = op.lambda() * un * un;
    if (forcing.kind == Forcing::Kind::Constant)
      row.forcing = -2.0 * l2_inner(forcing.f0, st.u);
    row.total = row.kinetic + row.elastic + row.mass + row.forcing;
    ledger.rows.push_back(row);
  }
  return ledger;
}

double sqrt_energy_norm(const OperatorHandle& op, const VectorField& u) {
  return energy_inner(op, u, u);
}

}  // namespace nlwave

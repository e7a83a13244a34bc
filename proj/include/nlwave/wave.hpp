#pragma once

#include <vector>

#include "nlwave/operator.hpp"

namespace nlwave {

struct WaveState {
  double t = 0;
  VectorField u;
  VectorField v;
};

struct Forcing {
  enum class Kind { Zero, Constant, TimeSeries } kind = Kind::Zero;
  VectorField f0;
  /// Piecewise-constant samples: value f(t) = series[i].second for
  /// t in [series[i].first, series[i+1].first).
  std::vector<std::pair<double, VectorField>> series;

  static Forcing zero() { return Forcing{}; }
  static Forcing constant(VectorField f) {
    Forcing fo;
    fo.kind = Kind::Constant;
    fo.f0 = std::move(f);
    return fo;
  }
  static Forcing time_series(std::vector<std::pair<double, VectorField>> s) {
    Forcing fo;
    fo.kind = Kind::TimeSeries;
    fo.series = std::move(s);
    return fo;
  }
};

enum class StepperKind { Exact, Leapfrog };

/// Per-mode harmonic evolution of u_tt + (M + lambda I) u = f for even
/// kernels: eigendecomposition once, then closed-form oscillators. The exact
/// stepper evaluates every output time directly from the initial data, so no
/// step error accumulates.
class WavePropagator {
 public:
  explicit WavePropagator(const OperatorHandle& op);

  double max_eigenvalue() const { return max_eig_; }

  std::vector<WaveState> propagate_exact(const VectorField& u0,
                                         const VectorField& v0,
                                         const Forcing& forcing,
                                         const std::vector<double>& times) const;

  /// Velocity-Verlet (kick-drift-kick) with fixed dt; requires
  /// dt^2 * max_eig <= 4. Outputs every `steps/outputs` steps.
  std::vector<WaveState> propagate_leapfrog(const VectorField& u0,
                                            const VectorField& v0,
                                            const Forcing& forcing, double T,
                                            int steps, int outputs) const;

 private:
  const OperatorHandle& op_;
  std::vector<MatD> q_;        // eigenvectors per mode
  std::vector<VecD> eig_;      // eigenvalues of M + lambda I per mode
  double max_eig_ = 0;
};

std::vector<WaveState> propagate(const OperatorHandle& op,
                                 const VectorField& u0, const VectorField& v0,
                                 const Forcing& forcing, double T,
                                 StepperKind stepper, double dt, int outputs);

struct EnergyLedger {
  struct Row {
    double t = 0;
    double kinetic = 0;   // ||du/dt||^2
    double elastic = 0;   // <L u, u>
    double mass = 0;      // lambda ||u||^2
    double forcing = 0;   // -2 int <f0, u>
    double total = 0;     // sum of the four entries; conserved
  };
  std::vector<Row> rows;

  double max_relative_drift() const;
  void write_csv(const std::string& path) const;
};

/// Conservation-law ledger for zero or constant-in-time forcing; the elastic
/// term is the spectral bilinear form. Time-varying forcing is rejected.
EnergyLedger energy_ledger(const std::vector<WaveState>& traj,
                           const OperatorHandle& op, const Forcing& forcing);

/// <L_lambda^{1/2} u, L_lambda^{1/2} u> = <L u, u> + lambda ||u||^2.
double sqrt_energy_norm(const OperatorHandle& op, const VectorField& u);

}  // namespace nlwave

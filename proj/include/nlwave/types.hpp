#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace nlwave {

using Complex = std::complex<double>;

// Spatial dimension is 2 or 3 throughout. All small vectors/matrices use
// fixed-capacity Eigen types so no per-element heap traffic occurs in the
// per-mode loops.
using VecD  = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using MatD  = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using CVecD = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 3, 1>;
using CMatD = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Bad parameter values in a kernel/grid/run specification.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A quadrature or eigensolve failed to reach its tolerance.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A per-mode linear solve is singular or ill conditioned.
struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_dim(int d, const char* where) {
  if (d != 2 && d != 3)
    throw config_error(std::string(where) + ": dimension must be 2 or 3");
}

}  // namespace nlwave

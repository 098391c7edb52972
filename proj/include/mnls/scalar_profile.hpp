#pragma once

#include <vector>

namespace mnls {

struct ProfileConfig {
  int dim = 1;
  double p = 1.0;
  double r_max = 40.0;
  int n_grid = 16385;
  /// Bisection stops once the bracket on Q(0) is narrower than this (or
  /// cannot be split further in double precision).
  double shoot_tol = 1e-15;
  /// Relative tolerance of the adaptive integrator; bounds the accuracy of
  /// the stored profile and hence of its integrals.
  double quad_tol = 1e-12;
  double bracket_lo = 0.1;
  double bracket_hi = 50.0;

  /// Throws SupercriticalExponent or InvalidArgument.
  void validate() const;

  friend bool operator==(const ProfileConfig&, const ProfileConfig&) = default;
};

struct ProfileIntegrals {
  double mass = 0.0;     // ||Q||_2^2
  double kinetic = 0.0;  // ||grad Q||_2^2
  double i1 = 0.0;       // kinetic + mass
  double j1 = 0.0;       // int Q^{2p+2}
};

/// Positive radial ground state Q of  Q'' + (N-1)/r Q' - Q + Q^{2p+1} = 0
/// sampled on a uniform grid over [0, r_max]. The grid has at least n_grid
/// points and is refined so the spacing stays below 2% of the core width
/// Q(0)^{-p}.
struct ScalarProfile {
  ProfileConfig config;
  double q0 = 0.0;
  std::vector<double> r;
  std::vector<double> q;
  std::vector<double> dq;  // Q'(r)
  /// First radius from which the linear decaying tail is used.
  double tail_start = 0.0;
  double mass = 0.0;
  double kinetic = 0.0;
  double i1 = 0.0;
  double j1 = 0.0;

  double spacing() const { return r[1] - r[0]; }

  /// Q at arbitrary radius: cubic Hermite on the grid, decaying tail beyond.
  double value(double radius) const;
  double derivative(double radius) const;
  /// Relative residual of (N-2)/2 T + N/2 M = N/(2p+2) J.
  double pohozaev_residual() const;
  /// |I1 - J1| / J1.
  double bound_state_residual() const;
};

ScalarProfile solve_profile(const ProfileConfig& cfg);

/// N = 1 ground state: (p+1)^{1/(2p)} sech^{1/p}(p x).
double closed_form_1d(double p, double x);

/// Recomputes the integrals from the stored samples.
ProfileIntegrals profile_integrals(const ScalarProfile& prof);

/// Decaying solution of the linearized radial equation, r^{-nu} K_nu(r) with
/// nu = (N-2)/2, and its radial derivative. Both up to a common constant.
double linear_tail(int dim, double radius);
double linear_tail_derivative(int dim, double radius);

}  // namespace mnls

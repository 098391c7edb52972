#pragma once

// Reference values computed independently of the library: closed forms in
// 1D, hand-solved amplitude systems and tabulated constants.

#include <cmath>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// 1D ground state of Q'' - Q + Q^{2p+1} = 0.
inline double sech_profile(double p, double x) {
  return std::pow(p + 1.0, 0.5 / p) * std::pow(1.0 / std::cosh(p * x), 1.0 / p);
}

// Residual of the ODE at x for the profile above, derivatives by hand.
inline double sech_ode_residual(double p, double x) {
  const double a = std::pow(p + 1.0, 0.5 / p);
  const double s = 1.0 / std::cosh(p * x), t = std::tanh(p * x);
  const double q = a * std::pow(s, 1.0 / p);
  // Q' = -Q t,  Q'' = Q (t^2 - p s^2)
  const double q2 = q * (t * t - p * s * s);
  return q2 - q + std::pow(q, 2.0 * p + 1.0);
}

// ||Q||^2 in 1D: (p+1)^{1/p} / p * B(1/p, 1/2).
inline double mass_1d(double p) { return std::pow(p + 1.0, 1.0 / p) / p * std::beta(1.0 / p, 0.5); }

inline double q0_1d(double p) { return std::pow(p + 1.0, 0.5 / p); }

// mpmath, 30 digits, truncated.
inline constexpr double mass_1d_table[][2] = {
    {0.5, 6.0}, {1.0, 4.0}, {2.0, 2.72069904635133}, {3.0, 2.22582534904461}};

// Mass of the 2D cubic ground state (Townes profile).
inline constexpr double townes_mass = 11.7008965146;

// Sharp 1D GN constant at p = 2: J <= C M^2 T with C = 4 / pi^2.
inline constexpr double gn_1d_quintic = 4.0 / (pi * pi);

// Two-component p = 1 amplitudes: k11 a^2 + k12 b^2 = 1, k12 a^2 + k22 b^2 = 1.
struct Pair {
  double a, b;
};
inline Pair cubic_pair(double k11, double k12, double k22) {
  const double det = k11 * k22 - k12 * k12;
  return {std::sqrt((k22 - k12) / det), std::sqrt((k11 - k12) / det)};
}

// Equal amplitudes of the symmetric two-component system.
inline double equal_amplitude(double k11, double k12, double p) { return std::pow(k11 + k12, -0.5 / p); }

// Positive roots of x - 1 + (x^{-1/2} - x^{3/2}) / 4: with x = y^2 the
// equation factors as (y^2 - 1)(y^2 - 4y + 1) = 0.
inline constexpr double ratio_roots[3] = {7.0 - 4.0 * std::numbers::sqrt3, 1.0, 7.0 + 4.0 * std::numbers::sqrt3};

}  // namespace oracle

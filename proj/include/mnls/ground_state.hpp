#pragma once

#include <span>
#include <vector>

#include "mnls/amplitudes.hpp"
#include "mnls/coupling.hpp"
#include "mnls/scalar_profile.hpp"

namespace mnls {

/// M(U), T(U) and J(U) of a field, plus the derived quantities.
struct Functionals {
  double mass = 0.0;
  double kinetic = 0.0;
  double j = 0.0;

  double i() const { return mass + kinetic; }
  double energy(double p) const { return 0.5 * kinetic - j / (2.0 * p + 2.0); }
};

/// M^{p+1-Np/2} T^{Np/2} / J.
double gn_value(const Functionals& f, int dim, double p);

/// U = (a_i Q), every component sharing one co-located profile.
struct GroundState {
  ScalarProfile profile;
  CouplingMatrix coupling;
  AmplitudeSolution amplitudes;
  std::vector<double> theta;
  double shift = 0.0;

  std::vector<double> component_mass;
  double mass = 0.0;
  double kinetic = 0.0;
  double i_val = 0.0;
  double j_val = 0.0;
  double action = 0.0;
  double gn = 0.0;

  int dim() const { return profile.config.dim; }
  double p() const { return profile.config.p; }
  Functionals functionals() const { return {mass, kinetic, j_val}; }
};

/// Functionals of (x_i Q) for arbitrary amplitudes x.
Functionals amplitude_functionals(const CouplingMatrix& k, const ScalarProfile& q, std::span<const double> x);

/// Canonical representative (theta = 0, y = 0) built from the first winner.
GroundState assemble(const CouplingMatrix& k, const ScalarProfile& profile, const SelectionResult& sel);
GroundState assemble(const CouplingMatrix& k, const ScalarProfile& profile, const AmplitudeSolution& winner);

/// Max-norm of the bound-state equations on the radial grid, with second
/// order central differences of the stored Q.
double pde_residual(const GroundState& gs);

/// C_M = 1 / GN(gs).
double gn_constant(const GroundState& gs);

struct CriticalMass {
  double mass = 0.0;
  /// |((p+1)/C_M)^{N/2} / M - 1|
  double identity_residual = 0.0;
  /// |E| / T
  double energy_ratio = 0.0;

  bool ok() const { return identity_residual < 1e-8 && energy_ratio < 1e-6; }
};

/// Requires p = 2/N.
CriticalMass critical_mass(const GroundState& gs);

/// I of (t x_i Q) with t chosen so that I = J. Throws InvalidArgument when
/// J(x Q) <= 0, since such a state has no projection.
double nehari_level(const CouplingMatrix& k, const ScalarProfile& q, std::span<const double> x);

}  // namespace mnls

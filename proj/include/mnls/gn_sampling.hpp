#pragma once

#include <cstddef>
#include <cstdint>

#include "mnls/ground_state.hpp"

namespace mnls {

struct GnSampleConfig {
  int samples = 1000;
  std::uint64_t seed = 0x5eed;
  double length = 40.0;
  /// Points per axis; 0 picks 2048 in 1D and 256 in 2D.
  std::size_t n = 0;
  int max_bumps = 3;
};

struct GnSampleReport {
  int samples = 0;
  /// Samples with J > 0, the only ones for which the inequality is not trivial.
  int positive_j = 0;
  int violations = 0;
  /// Largest J / (C M^{p+1-Np/2} T^{Np/2}) over the samples.
  double max_ratio = 0.0;
  /// The same ratio for the ground state, through the same quadrature.
  double ground_state_ratio = 0.0;
};

/// Tests J(U) <= C M(U)^{p+1-Np/2} T(U)^{Np/2} on seeded random sums of
/// complex Gaussian bumps over a Cartesian grid (dim 1 or 2).
GnSampleReport sample_gn_inequality(const GroundState& gs, double c, const GnSampleConfig& cfg = {});

}  // namespace mnls

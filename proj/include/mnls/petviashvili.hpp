#pragma once

#include <cstddef>

namespace mnls {

struct PetviashviliConfig {
  int dim = 2;
  double p = 1.0;
  double length = 40.0;  // periodic box side
  std::size_t n = 256;   // points per axis
  double tol = 1e-13;
  int max_iterations = 3000;
};

struct PetviashviliResult {
  double q0 = 0.0;
  double mass = 0.0;
  double kinetic = 0.0;
  double j1 = 0.0;
  int iterations = 0;
  /// Final value of the stabilizing factor; tends to 1 at the fixed point.
  double stabilizer = 0.0;
};

/// Spectral fixed-point iteration for  -Q + Delta Q + Q^{2p+1} = 0  on a
/// periodic Cartesian box. Independent of the radial shooting solver.
PetviashviliResult petviashvili_profile(const PetviashviliConfig& cfg);

}  // namespace mnls

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mnls/coupling.hpp"

namespace mnls {

/// Positive amplitudes B with  sum_j k_ij b_i^{p-1} b_j^{p+1} = 1  on a support.
struct AmplitudeSolution {
  Support support;
  /// Length m; zero off the support.
  std::vector<double> b;
  /// max_i |F_i(B)| over the support.
  double residual = 0.0;
  double norm2 = 0.0;
};

struct SelectionResult {
  std::vector<AmplitudeSolution> winners;
  std::vector<AmplitudeSolution> candidates;
  bool degenerate_family = false;
};

struct NewtonOptions {
  std::uint64_t seed = 0x5eed;
  int starts = 64;
  double start_lo = 1e-2;
  double start_hi = 1e2;
  double tol = 1e-12;
  int max_iterations = 500;
  /// Iterates are kept at or above this value.
  double floor = 1e-8;
  /// Converged points with a component below this are dropped; the smaller
  /// support produces that state itself.
  double collapse = 1e-6;
  double dedup = 1e-7;
};

/// F_i(B) for i in the support (zero elsewhere).
std::vector<double> amplitude_residual(const CouplingMatrix& k, double p, Support support, std::span<const double> b);

/// Damped Newton multistart. Throws NoSolutionFound when no start converges
/// to a positive root.
std::vector<AmplitudeSolution> solve_on_support(const CouplingMatrix& k, double p, Support support,
                                                const NewtonOptions& options = {});

/// Nonempty subsets of each partition group, by group then cardinality.
std::vector<Support> enumerate_supports(const CouplingMatrix& k, const PartitionStructure& part);

/// Minimizers of norm2 * i1_q; ties within 1e-8 relative are all kept.
SelectionResult select_minimal(std::span<const AmplitudeSolution> candidates, double i1_q);

/// Equal amplitude (k11 + k12)^{-1/(2p)} of the symmetric two-component
/// problem, in the two regimes where it is known to be the ground state.
double oracle_symmetric(double k11, double k12, double p);

/// f(x) = k11 x^{2p} - k11 + k12 (x^{p-1} - x^{p+1}); its positive roots are
/// the amplitude ratios of two-component solutions with k11 = k22.
double f_ratio(double k11, double k12, double p, double x);

struct RootReport {
  std::vector<double> roots;
  bool unit_root = false;
  /// max |x * x' - 1| over each root and its nearest reciprocal partner.
  double pairing_error = 0.0;
};

RootReport analyze_f_roots(double k11, double k12, double p);

struct SmallBetaPrediction {
  std::vector<std::size_t> indices;
  double amplitude = 0.0;
};

/// Single-component ground states predicted for weak cross coupling: the
/// components with the largest self-coupling, amplitude k_ii^{-1/(2p)}.
SmallBetaPrediction small_beta_regime(const CouplingMatrix& k, double p);

struct AmplitudeAnalysis {
  PartitionStructure partition;
  std::vector<Support> supports;
  SelectionResult selection;
};

/// Partition, support enumeration, Newton solve per support and selection.
AmplitudeAnalysis analyze_amplitudes(const CouplingMatrix& k, double p, double i1_q,
                                     const NewtonOptions& options = {});

}  // namespace mnls

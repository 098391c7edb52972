#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mnls/coupling.hpp"
#include "mnls/fft.hpp"
#include "mnls/ground_state.hpp"
#include "mnls/kernels.hpp"

namespace mnls {

using cplx = std::complex<double>;

/// Periodic box [-L/2, L/2)^dim with n points per axis.
struct Grid {
  int dim = 1;
  double length = 32.0;
  std::size_t n = 1024;

  void validate() const;
  std::size_t size() const;
  double spacing() const { return length / static_cast<double>(n); }
  double cell() const;
  double coordinate(std::size_t i) const { return -0.5 * length + spacing() * static_cast<double>(i); }
  /// Squared distance of grid point idx from the origin.
  double radius2(std::size_t idx) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

struct FieldState {
  Grid grid;
  /// One array per component, row-major over the grid.
  std::vector<std::vector<cplx>> v;
  double t = 0.0;

  std::size_t components() const { return v.size(); }
};

struct Diagnostics {
  std::vector<double> mass;
  double total_mass = 0.0;
  double kinetic = 0.0;
  double energy = 0.0;
  double j = 0.0;
};

/// Strang split-step Fourier propagator for one grid, coupling and exponent.
class Stepper {
 public:
  Stepper(const Grid& grid, const CouplingMatrix& k, double p);

  /// One step of size dt (negative dt runs backwards). Throws NonFiniteField.
  void step(FieldState& state, double dt);
  Diagnostics diagnostics(const FieldState& state) const;
  /// Spectral T(V) alone.
  double kinetic(const FieldState& state) const;

  const kernels::KernelTable& kernel() const { return *kern_; }
  void set_kernel(const kernels::KernelTable& k) { kern_ = &k; }

 private:
  void nonlinear(FieldState& state, double tau);
  void linear(FieldState& state, double dt);

  Grid grid_;
  CouplingMatrix k_;
  double p_;
  Fft fft_;
  std::vector<double> k2_;
  std::vector<cplx> propagator_;
  double propagator_dt_ = 0.0;
  std::vector<std::vector<double>> a2_;
  mutable std::vector<cplx> scratch_;
  const kernels::KernelTable* kern_;
};

FieldState step(const FieldState& state, const CouplingMatrix& k, double p, double dt);
Diagnostics diagnostics(const FieldState& state, const CouplingMatrix& k, double p);

struct EvolveConfig {
  double dt = 1e-3;
  double t_end = 10.0;
  double blowup_factor = 1e3;
  /// Steps between recorded diagnostics and frames.
  int record_every = 100;
  /// Radius of the concentration window.
  double window_radius = 2.0;
  /// Frame history is thinned by half whenever it exceeds this size.
  std::size_t max_frames = 256;

  void validate() const;

  friend bool operator==(const EvolveConfig&, const EvolveConfig&) = default;
};

enum class Verdict { Global, Blowup, Inconclusive };
std::string to_string(Verdict v);

struct SeriesPoint {
  double t = 0.0;
  std::vector<double> mass;
  double kinetic = 0.0;
  double energy = 0.0;
  double j = 0.0;
  double window_mass = 0.0;
};

struct DichotomyResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> blowup_time;
  bool non_finite = false;
  double initial_kinetic = 0.0;
  double max_kinetic_ratio = 0.0;
  std::size_t steps = 0;
  std::vector<SeriesPoint> series;
  /// Thinned frame history ending with the last finite state.
  std::vector<FieldState> frames;
};

DichotomyResult run_dichotomy(const FieldState& v0, const CouplingMatrix& k, double p, const EvolveConfig& cfg);

/// sum_i int_{|x - x(t)| < R} |v_i|^2 with x(t) the grid maximum of sum_i |v_i|^2.
double window_mass(const FieldState& state, double radius);

/// Window mass of every recorded frame. Throws NotABlowupRun unless the run
/// ended in a BLOWUP verdict.
std::vector<double> concentration_monitor(const DichotomyResult& run, double radius);

/// Relative H^1 distance between the rescaled, recentred and phase-fitted
/// field and the ground state, divided by I(ground state).
double rescaled_profile_distance(const FieldState& state, const GroundState& gs);

// Initial data.

/// scale * a_i Q(|x - center|) e^{-i chirp |x - center|^2}.
FieldState ground_state_data(const Grid& grid, const GroundState& gs, double scale, double chirp = 0.0,
                             std::span<const double> center = {});
/// amplitude_i * exp(-|x|^2 / (2 width^2)).
FieldState gaussian_data(const Grid& grid, std::span<const double> amplitudes, double width);
FieldState zero_data(const Grid& grid, std::size_t components);
/// Multiplies the field so that its total mass becomes target.
void rescale_mass(FieldState& state, double target);
double total_mass(const FieldState& state);

}  // namespace mnls

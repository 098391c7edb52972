#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnls/evolution.hpp"
#include "mnls/scalar_profile.hpp"

namespace mnls {

struct EvolutionSettings {
  Grid grid;
  EvolveConfig run;
  /// ground_state | gaussian | zero | snapshot
  std::string initial = "ground_state";
  /// Multiplier of the ground state.
  double scale = 1.0;
  /// Quadratic phase e^{-i chirp |x|^2} applied to ground-state data.
  double chirp = 0.0;
  /// Gaussian data: per-component amplitudes and common width.
  std::vector<double> amplitudes;
  double width = 1.0;
  std::string snapshot_in;
  std::string snapshot_out;

  friend bool operator==(const EvolutionSettings&, const EvolutionSettings&) = default;
};

/// A problem instance. File format: `key = value` lines, an optional
/// top-level `seed`, and sections [problem], [profile], [evolution].
struct Config {
  std::uint64_t seed = 0x5eed;
  int dim = 1;
  double p = 1.0;
  std::vector<std::vector<double>> coupling{{1.0}};
  /// Reports are written here when nonempty.
  std::string output_dir;
  int gn_samples = 1000;
  ProfileConfig profile;
  std::optional<EvolutionSettings> evolution;

  /// ProfileConfig with dim and p filled in from [problem].
  ProfileConfig profile_config() const;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Throws ConfigError with the offending line.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);
std::string serialize_config(const Config& cfg);

/// MNLS_SEED, when set, replaces cfg.seed.
void apply_environment(Config& cfg);

}  // namespace mnls

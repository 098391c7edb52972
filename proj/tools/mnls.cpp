// Batch front end: mnls profile|amplitudes|groundstate|gn|evolve|verify
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 solver failure, 4 coupling signs admit no partition, 5 no X >= 0 with
// X^T K X > 0 (no ground state exists).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mnls/amplitudes.hpp"
#include "mnls/config.hpp"
#include "mnls/coupling.hpp"
#include "mnls/error.hpp"
#include "mnls/evolution.hpp"
#include "mnls/gn_sampling.hpp"
#include "mnls/ground_state.hpp"
#include "mnls/reports.hpp"
#include "mnls/scalar_profile.hpp"
#include "mnls/snapshot.hpp"
#include "verify.hpp"

namespace {

using namespace mnls;

enum Exit { Ok = 0, VerifyFailed = 1, ConfigFailure = 2, SolverFailure = 3, NoPartition = 4, NoGroundState = 5 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::SupercriticalExponent:
    case ErrorKind::AsymmetricInput:
    case ErrorKind::NonFinite:
    case ErrorKind::IoError:
      return ConfigFailure;
    case ErrorKind::InvalidPartition:
      return NoPartition;
    default:
      return SolverFailure;
  }
}

struct Overrides {
  std::string config;
  std::optional<int> dim;
  std::optional<double> p;
  std::optional<std::string> coupling;
  std::optional<double> r_max;
  std::optional<int> n_grid;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<int> samples;
  std::optional<double> dt, t_end, length, scale, chirp, blowup_factor, width;
  std::optional<std::size_t> n;
  std::optional<int> record_every;
  std::optional<std::string> initial, snapshot_in, snapshot_out;
};

std::vector<std::vector<double>> parse_matrix(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return nlohmann::json::parse(text).get<std::vector<std::vector<double>>>();
    } catch (const std::exception& e) {
      throw Error(ErrorKind::ConfigError, std::string("bad --coupling matrix: ") + e.what());
    }
  }
  // Rows separated by ';', entries by ','.
  std::vector<std::vector<double>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<double> r;
    std::stringstream es(row);
    std::string cell;
    while (std::getline(es, cell, ',')) {
      try {
        std::size_t used = 0;
        r.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, "bad --coupling entry '" + cell + "'");
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

Config resolve(const Overrides& ov) {
  Config cfg;
  if (!ov.config.empty()) {
    cfg = load_config(ov.config);
  } else {
    apply_environment(cfg);
  }
  if (ov.dim) cfg.dim = *ov.dim;
  if (ov.p) cfg.p = *ov.p;
  if (ov.coupling) cfg.coupling = parse_matrix(*ov.coupling);
  if (ov.r_max) cfg.profile.r_max = *ov.r_max;
  if (ov.n_grid) cfg.profile.n_grid = *ov.n_grid;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.output_dir) cfg.output_dir = *ov.output_dir;
  if (ov.samples) cfg.gn_samples = *ov.samples;
  const bool evo_flags = ov.dt || ov.t_end || ov.length || ov.scale || ov.chirp || ov.blowup_factor || ov.width ||
                         ov.n || ov.record_every || ov.initial || ov.snapshot_in || ov.snapshot_out;
  if (evo_flags && !cfg.evolution) cfg.evolution = EvolutionSettings{};
  if (cfg.evolution) {
    auto& e = *cfg.evolution;
    e.grid.dim = cfg.dim;
    if (ov.dt) e.run.dt = *ov.dt;
    if (ov.t_end) e.run.t_end = *ov.t_end;
    if (ov.length) e.grid.length = *ov.length;
    if (ov.n) e.grid.n = *ov.n;
    if (ov.scale) e.scale = *ov.scale;
    if (ov.chirp) e.chirp = *ov.chirp;
    if (ov.blowup_factor) e.run.blowup_factor = *ov.blowup_factor;
    if (ov.width) e.width = *ov.width;
    if (ov.record_every) e.run.record_every = *ov.record_every;
    if (ov.initial) e.initial = *ov.initial;
    if (ov.snapshot_in) e.snapshot_in = *ov.snapshot_in;
    if (ov.snapshot_out) e.snapshot_out = *ov.snapshot_out;
  }
  cfg.profile_config().validate();
  return cfg;
}

std::string out_path(const Config& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

void emit(const Config& cfg, const std::string& name, const json& j) {
  std::cout << j.dump(2) << "\n";
  if (!cfg.output_dir.empty()) write_json(out_path(cfg, name), j);
}

struct Pipeline {
  CouplingMatrix k;
  ScalarProfile profile;
  AmplitudeAnalysis analysis;
};

// Runs (P1), partition, profile and amplitude selection. Returns an exit code
// through `code` when the instance has no ground state to compute.
std::optional<Pipeline> pipeline(const Config& cfg, int& code) {
  auto k = CouplingMatrix::create(cfg.coupling);
  P1Options p1;
  p1.seed = cfg.seed;
  if (!check_p1(k, p1)) {
    std::cerr << "mnls: X^T K X <= 0 for every X >= 0; no bound state exists\n";
    code = NoGroundState;
    return std::nullopt;
  }
  const auto part = detect_partition(k);
  if (!part.valid) {
    std::cerr << "mnls: coupling signs do not split into attractive groups (pair " << part.violating_pair->first
              << ", " << part.violating_pair->second << ")\n";
    std::cout << json{{"partition", partition_json(part)}}.dump(2) << "\n";
    code = NoPartition;
    return std::nullopt;
  }
  auto prof = solve_profile(cfg.profile_config());
  NewtonOptions opt;
  opt.seed = cfg.seed;
  auto analysis = analyze_amplitudes(k, cfg.p, prof.i1, opt);
  return Pipeline{std::move(k), std::move(prof), std::move(analysis)};
}

bool is_critical(const Config& cfg) { return std::abs(cfg.p - 2.0 / cfg.dim) <= 1e-12; }

int cmd_profile(const Config& cfg) {
  const auto prof = solve_profile(cfg.profile_config());
  emit(cfg, "profile.json", profile_json(prof));
  if (!cfg.output_dir.empty()) write_profile_csv(out_path(cfg, "profile.csv"), prof);
  return Ok;
}

int cmd_amplitudes(const Config& cfg) {
  int code = Ok;
  auto pl = pipeline(cfg, code);
  if (!pl) return code;
  emit(cfg, "amplitudes.json", amplitudes_json(pl->analysis));
  return Ok;
}

json ground_state_report(const Config& cfg, const Pipeline& pl, const GroundState& gs) {
  std::optional<CriticalMass> crit;
  if (is_critical(cfg)) crit = critical_mass(gs);
  json j;
  j["profile"] = profile_json(pl.profile);
  j["amplitudes"] = amplitudes_json(pl.analysis);
  j["ground_state"] = ground_state_json(gs, pde_residual(gs), crit);
  return j;
}

int cmd_groundstate(const Config& cfg) {
  int code = Ok;
  auto pl = pipeline(cfg, code);
  if (!pl) return code;
  const auto gs = assemble(pl->k, pl->profile, pl->analysis.selection);
  emit(cfg, "groundstate.json", ground_state_report(cfg, *pl, gs));
  return Ok;
}

int cmd_gn(const Config& cfg) {
  int code = Ok;
  auto pl = pipeline(cfg, code);
  if (!pl) return code;
  const auto gs = assemble(pl->k, pl->profile, pl->analysis.selection);
  json j = ground_state_report(cfg, *pl, gs);
  GnSampleConfig sc;
  sc.samples = cfg.gn_samples;
  sc.seed = cfg.seed;
  const double c = gn_constant(gs);
  j["gn_sampling"] = gn_json(sample_gn_inequality(gs, c, sc), c);
  emit(cfg, "gn.json", j);
  return Ok;
}

int cmd_evolve(const Config& cfg) {
  const EvolutionSettings evo = cfg.evolution.value_or(EvolutionSettings{});
  Grid grid = evo.grid;
  grid.dim = cfg.dim;
  grid.validate();
  evo.run.validate();
  const auto k = CouplingMatrix::create(cfg.coupling);

  json j;
  std::optional<GroundState> gs;
  if (evo.initial == "ground_state") {
    int code = Ok;
    auto pl = pipeline(cfg, code);
    if (!pl) return code;
    gs = assemble(pl->k, pl->profile, pl->analysis.selection);
    j["ground_state"] = ground_state_report(cfg, *pl, *gs)["ground_state"];
  }

  FieldState v0;
  if (evo.initial == "ground_state") {
    v0 = ground_state_data(grid, *gs, evo.scale, evo.chirp);
  } else if (evo.initial == "gaussian") {
    std::vector<double> amps = evo.amplitudes;
    if (amps.empty()) amps.assign(k.size(), 1.0);
    if (amps.size() != k.size()) throw Error(ErrorKind::ConfigError, "evolution.amplitudes needs one entry per component");
    v0 = gaussian_data(grid, amps, evo.width);
  } else if (evo.initial == "zero") {
    v0 = zero_data(grid, k.size());
  } else if (evo.initial == "snapshot") {
    if (evo.snapshot_in.empty()) throw Error(ErrorKind::ConfigError, "evolution.snapshot_in is required");
    v0 = read_snapshot(evo.snapshot_in, grid.length);
    if (!(v0.grid == grid)) throw Error(ErrorKind::ConfigError, "snapshot grid differs from [evolution] grid");
    if (v0.components() != k.size()) throw Error(ErrorKind::ConfigError, "snapshot component count differs");
  } else {
    throw Error(ErrorKind::ConfigError, "unknown initial data '" + evo.initial + "'");
  }

  const auto run = run_dichotomy(v0, k, cfg.p, evo.run);
  std::optional<std::vector<double>> conc;
  if (run.verdict == Verdict::Blowup) conc = concentration_monitor(run, evo.run.window_radius);
  j["run"] = verdict_json(run, conc);
  j["initial_mass"] = total_mass(v0);
  if (gs && run.verdict == Verdict::Blowup)
    j["rescaled_distance"] = rescaled_profile_distance(run.frames.back(), *gs);
  emit(cfg, "evolve.json", j);
  if (!cfg.output_dir.empty()) write_series_csv(out_path(cfg, "series.csv"), run.series);
  if (!evo.snapshot_out.empty()) write_snapshot(evo.snapshot_out, run.frames.back());
  return Ok;
}

void add_problem_flags(CLI::App* sub, Overrides& ov) {
  sub->add_option("--config", ov.config, "Problem file")->check(CLI::ExistingFile);
  sub->add_option("--dim", ov.dim, "Spatial dimension N (1, 2 or 3)");
  sub->add_option("--p", ov.p, "Exponent p");
  sub->add_option("--coupling", ov.coupling, "Coupling matrix, \"1,2;2,1\" or JSON rows");
  sub->add_option("--r-max", ov.r_max, "Radial domain length");
  sub->add_option("--n-grid", ov.n_grid, "Minimum radial grid points");
  sub->add_option("--seed", ov.seed, "Seed for multistart and sampling");
  sub->add_option("-o,--output-dir", ov.output_dir, "Write reports into this directory");
}

void add_evolution_flags(CLI::App* sub, Overrides& ov) {
  sub->add_option("--dt", ov.dt, "Time step");
  sub->add_option("--t-end", ov.t_end, "Final time");
  sub->add_option("--length", ov.length, "Periodic box side");
  sub->add_option("--n", ov.n, "Grid points per axis (power of two)");
  sub->add_option("--initial", ov.initial, "ground_state | gaussian | zero | snapshot");
  sub->add_option("--scale", ov.scale, "Multiplier of ground-state data");
  sub->add_option("--chirp", ov.chirp, "Quadratic phase of ground-state data");
  sub->add_option("--width", ov.width, "Width of Gaussian data");
  sub->add_option("--blowup-factor", ov.blowup_factor, "Gradient growth that declares blowup");
  sub->add_option("--record-every", ov.record_every, "Steps between recorded diagnostics");
  sub->add_option("--snapshot-in", ov.snapshot_in, "Initial snapshot file");
  sub->add_option("--snapshot-out", ov.snapshot_out, "Write the final field here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states, optimal constants and dynamics of coupled Schrodinger systems"};
  app.require_subcommand(1);
  Overrides ov;
  std::string only, fault;

  auto* profile = app.add_subcommand("profile", "Scalar radial ground-state profile");
  auto* amplitudes = app.add_subcommand("amplitudes", "Amplitude candidates and minimizers");
  auto* groundstate = app.add_subcommand("groundstate", "Full ground state and functionals");
  auto* gn = app.add_subcommand("gn", "Gagliardo-Nirenberg constant with sampling check");
  auto* evolve = app.add_subcommand("evolve", "Split-step evolution and blowup dichotomy");
  auto* verify = app.add_subcommand("verify", "Run the oracle suite");
  for (auto* sub : {profile, amplitudes, groundstate, gn, evolve}) add_problem_flags(sub, ov);
  gn->add_option("--samples", ov.samples, "Random fields to test");
  add_evolution_flags(evolve, ov);
  verify->add_option("--only", only, "Run a single item");
  verify->add_option("--inject-fault", fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? Ok : ConfigFailure;
  }

  try {
    if (verify->parsed()) {
      const int failures = mnls::cli::run_verify(only, fault);
      if (failures < 0) {
        std::cerr << "mnls: no verify item named '" << only << "'\n";
        return ConfigFailure;
      }
      return failures == 0 ? Ok : VerifyFailed;
    }
    const Config cfg = resolve(ov);
    if (profile->parsed()) return cmd_profile(cfg);
    if (amplitudes->parsed()) return cmd_amplitudes(cfg);
    if (groundstate->parsed()) return cmd_groundstate(cfg);
    if (gn->parsed()) return cmd_gn(cfg);
    if (evolve->parsed()) return cmd_evolve(cfg);
  } catch (const Error& e) {
    std::cerr << "mnls: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "mnls: " << e.what() << "\n";
    return ConfigFailure;
  }
  return Ok;
}

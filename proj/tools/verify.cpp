#include "verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "mnls/amplitudes.hpp"
#include "mnls/evolution.hpp"
#include "mnls/gn_sampling.hpp"
#include "mnls/ground_state.hpp"
#include "mnls/petviashvili.hpp"
#include "mnls/scalar_profile.hpp"

namespace mnls::cli {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

ScalarProfile profile(int dim, double p) {
  ProfileConfig cfg;
  cfg.dim = dim;
  cfg.p = p;
  return solve_profile(cfg);
}

double bump(bool fault) { return fault ? 1.1 : 1.0; }

ItemResult profile1d(bool fault) {
  double worst = 0.0;
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const auto prof = profile(1, p);
    for (std::size_t i = 0; i < prof.r.size(); ++i)
      worst = std::max(worst, std::abs(bump(fault) * prof.q[i] - closed_form_1d(p, prof.r[i])));
  }
  return {worst < 1e-6, "max |Q - sech form| = " + sci(worst)};
}

ItemResult pohozaev(bool fault) {
  double worst = 0.0;
  const std::pair<int, double> points[] = {{1, 1.0}, {1, 3.0}, {2, 0.5}, {2, 1.0}, {2, 1.5}, {3, 1.0}};
  for (auto [dim, p] : points) {
    auto prof = profile(dim, p);
    prof.j1 *= bump(fault);
    worst = std::max({worst, prof.pohozaev_residual(), prof.bound_state_residual()});
  }
  return {worst < 1e-6, "max identity residual = " + sci(worst)};
}

ItemResult petviashvili(bool fault) {
  const auto prof = profile(2, 1.0);
  PetviashviliConfig pc;
  const auto ref = petviashvili_profile(pc);
  const double dq = std::abs(bump(fault) * prof.q0 / ref.q0 - 1.0);
  const double dm = std::abs(prof.mass / ref.mass - 1.0);
  return {dq < 1e-5 && dm < 1e-5, "q0 rel diff " + sci(dq) + ", mass rel diff " + sci(dm)};
}

ItemResult cor51(bool fault) {
  const auto k = CouplingMatrix::create({{-1.0, 2.0}, {2.0, -1.0}});
  const auto a = analyze_amplitudes(k, 1.0, 1.0);
  const auto& w = a.selection.winners.front();
  const double expect = std::pow(-1.0 + 2.0, -0.5);
  const double err = std::max(std::abs(bump(fault) * w.b[0] - expect), std::abs(w.b[1] - expect));
  return {err < 1e-8 && w.support == Support::full(2), "winner error " + sci(err)};
}

ItemResult cor52(bool fault) {
  const double k11 = 1.0, k22 = 2.0, k12 = 3.0;
  const auto k = CouplingMatrix::create({{k11, k12}, {k12, k22}});
  const auto a = analyze_amplitudes(k, 1.0, 1.0);
  const auto& w = a.selection.winners.front();
  const double det = k11 * k22 - k12 * k12;
  const double a0 = std::sqrt((k22 - k12) / det);
  const double b0 = std::sqrt((k11 - k12) / det);
  const double err = std::max(std::abs(bump(fault) * w.b[0] - a0), std::abs(w.b[1] - b0));
  return {err < 1e-8 && w.support == Support::full(2), "full-support winner error " + sci(err)};
}

ItemResult cor53(bool fault) {
  const auto k = CouplingMatrix::create({{1.0, 1.0}, {1.0, 1.0}});
  const auto sols = solve_on_support(k, 3.0, Support::full(2));
  const double expect = oracle_symmetric(1.0, 1.0, 3.0);
  double err = INFINITY;
  for (const auto& s : sols)
    err = std::min(err, std::max(std::abs(bump(fault) * s.b[0] - expect), std::abs(s.b[1] - expect)));
  return {err < 1e-8, "equal-amplitude error " + sci(err)};
}

ItemResult ratio_roots(bool fault) {
  auto rep = analyze_f_roots(1.0, 0.25, 0.5);
  if (fault && !rep.roots.empty()) rep.roots.front() *= 1.1;
  double pair = 0.0;
  if (rep.roots.size() == 3) pair = std::abs(rep.roots.front() * rep.roots.back() - 1.0);
  const bool ok = rep.roots.size() == 3 && rep.unit_root && pair < 1e-8;
  return {ok, std::to_string(rep.roots.size()) + " roots, pairing error " + sci(pair)};
}

ItemResult group_support(bool fault) {
  const auto k = CouplingMatrix::create({{1.0, 2.0, -0.5}, {2.0, 1.5, -0.5}, {-0.5, -0.5, 1.0}});
  const auto prof = profile(1, 1.0);
  const auto a = analyze_amplitudes(k, 1.0, prof.i1);
  const auto gs = assemble(k, prof, a.selection);
  bool confined = false;
  for (const auto& g : a.partition.groups) {
    std::uint64_t bits = 0;
    for (auto i : g) bits |= std::uint64_t{1} << i;
    if ((gs.amplitudes.support.bits() & ~bits) == 0) confined = true;
  }
  std::vector<double> trial = gs.amplitudes.b;
  trial[2] = 1.0;
  const double level = nehari_level(k, prof, trial);
  const double winner = gs.i_val * bump(fault) * bump(fault);
  return {confined && level > winner, "winner I " + sci(winner) + ", cross-group trial I " + sci(level)};
}

ItemResult gn(bool fault) {
  const auto prof = profile(1, 2.0);
  const auto k = CouplingMatrix::create({{1.0}});
  const auto gs = assemble(k, prof, analyze_amplitudes(k, 2.0, prof.i1).selection);
  const double c = gn_constant(gs) * bump(fault);
  const double expect = 4.0 / (std::numbers::pi * std::numbers::pi);
  const auto rep = sample_gn_inequality(gs, c);
  const double err = std::abs(c - expect);
  const bool ok = err < 1e-4 && rep.violations == 0 && std::abs(rep.ground_state_ratio - 1.0) < 1e-6;
  return {ok, "C error " + sci(err) + ", violations " + std::to_string(rep.violations) + ", equality gap " +
                  sci(std::abs(rep.ground_state_ratio - 1.0))};
}

ItemResult critical(bool fault) {
  double worst_id = 0.0, worst_e = 0.0;
  for (auto [dim, kval] : {std::pair{1, 1.0}, std::pair{2, 1.0}}) {
    const double p = 2.0 / dim;
    const auto prof = profile(dim, p);
    const auto k = CouplingMatrix::create({{kval}});
    auto gs = assemble(k, prof, analyze_amplitudes(k, p, prof.i1).selection);
    gs.mass *= bump(fault);
    const auto cm = critical_mass(gs);
    worst_id = std::max(worst_id, cm.identity_residual);
    worst_e = std::max(worst_e, cm.energy_ratio);
  }
  return {worst_id < 1e-8 && worst_e < 1e-6, "identity residual " + sci(worst_id) + ", |E|/T " + sci(worst_e)};
}

ItemResult conservation(bool fault) {
  const auto prof = profile(1, 1.0);
  const auto k = CouplingMatrix::create({{1.0}});
  const auto gs = assemble(k, prof, analyze_amplitudes(k, 1.0, prof.i1).selection);
  const Grid g{1, 40.0, 1024};
  FieldState s = ground_state_data(g, gs, 1.0);
  Stepper st(g, k, 1.0);
  const double m0 = st.diagnostics(s).mass[0];
  for (int i = 0; i < 1000; ++i) st.step(s, 1e-3);
  const double drift = std::abs(bump(fault) * st.diagnostics(s).mass[0] / m0 - 1.0);
  double modulus = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    modulus = std::max(modulus, std::abs(std::abs(s.v[0][i]) - prof.value(std::abs(g.coordinate(i)))));
  return {drift < 1e-10 && modulus < 1e-4, "mass drift " + sci(drift) + ", modulus error " + sci(modulus)};
}

ItemResult residual(bool fault) {
  const auto prof = profile(1, 1.0);
  const auto k = CouplingMatrix::create({{-1.0, 2.0}, {2.0, -1.0}});
  auto gs = assemble(k, prof, analyze_amplitudes(k, 1.0, prof.i1).selection);
  if (fault)
    for (double& b : gs.amplitudes.b) b *= 1.1;
  const double res = pde_residual(gs);
  auto bad = gs;
  for (double& b : bad.amplitudes.b) b *= 1.1;
  const double perturbed = pde_residual(bad);
  return {res < 1e-4 && perturbed > 1e-2, "residual " + sci(res) + ", perturbed amplitudes " + sci(perturbed)};
}

}  // namespace

const std::vector<VerifyItem>& verify_items() {
  static const std::vector<VerifyItem> items{
      {"profile1d", "1D shooting profile against the sech closed form", profile1d},
      {"pohozaev", "Pohozaev and I1 = J1 identities, N = 1, 2, 3", pohozaev},
      {"petviashvili", "2D profile against the spectral fixed-point solver", petviashvili},
      {"cor5.1", "equal amplitudes with repulsive self-coupling", cor51},
      {"cor5.2", "closed-form two-component amplitudes at p = 1", cor52},
      {"cor5.3", "equal amplitudes with attractive coupling", cor53},
      {"ratio-roots", "three reciprocal roots of the ratio function", ratio_roots},
      {"group-support", "support confined to one attractive group", group_support},
      {"gn", "optimal Gagliardo-Nirenberg constant and sampling", gn},
      {"critical-mass", "critical mass identity and zero energy", critical},
      {"conservation", "mass conservation and standing soliton", conservation},
      {"pde-residual", "bound-state equations on the radial grid", residual},
  };
  return items;
}

int run_verify(const std::string& only, const std::string& fault) {
  int failures = 0;
  bool matched = false;
  for (const auto& item : verify_items()) {
    if (!only.empty() && item.name != only) continue;
    matched = true;
    ItemResult r;
    try {
      r = item.run(item.name == fault);
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s  %-14s %s\n", r.pass ? "PASS" : "FAIL", item.name.c_str(), r.detail.c_str());
    if (!r.pass) ++failures;
  }
  return matched ? failures : -1;
}

}  // namespace mnls::cli

#include <cmath>

#include "../oracles.hpp"
#include "doctest.h"
#include "mnls/error.hpp"
#include "mnls/gn_sampling.hpp"
#include "mnls/ground_state.hpp"
#include "mnls/petviashvili.hpp"

using namespace mnls;

namespace {

ScalarProfile solve(int dim, double p, double r_max = 40.0, int n_grid = 16385) {
  ProfileConfig cfg;
  cfg.dim = dim;
  cfg.p = p;
  cfg.r_max = r_max;
  cfg.n_grid = n_grid;
  return solve_profile(cfg);
}

GroundState build(const std::vector<std::vector<double>>& rows, const ScalarProfile& prof) {
  const auto k = CouplingMatrix::create(rows);
  return assemble(k, prof, analyze_amplitudes(k, prof.config.p, prof.i1).selection);
}

}  // namespace

TEST_CASE("assembled functionals") {
  const auto q = solve(1, 1.0);
  const auto gs = build({{1.0}}, q);
  CHECK(gs.mass == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(gs.i_val == doctest::Approx(q.j1).epsilon(1e-9));
  CHECK(std::abs(gs.i_val - gs.j_val) / gs.j_val < 1e-6);
  CHECK(gs.action == doctest::Approx((0.5 - 1.0 / 4.0) * gs.i_val).epsilon(1e-10));
  CHECK(gs.gn > 0.0);

  const auto g2 = build({{-1.0, 2.0}, {2.0, -1.0}}, q);
  CHECK(g2.mass == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(g2.component_mass[0] == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(g2.theta == std::vector<double>{0.0, 0.0});

  CHECK_THROWS_AS(assemble(CouplingMatrix::create({{1.0}}), q, SelectionResult{}), Error);
}

TEST_CASE("degenerate family members share the action") {
  const auto q = solve(1, 1.0);
  const auto k = CouplingMatrix::create({{1.0, 1.0}, {1.0, 1.0}});
  const auto sel = analyze_amplitudes(k, 1.0, q.i1).selection;
  REQUIRE(sel.degenerate_family);
  const double s0 = assemble(k, q, sel.winners.front()).action;
  for (const auto& w : sel.winners) CHECK(assemble(k, q, w).action == doctest::Approx(s0).epsilon(1e-8));
}

TEST_CASE("winner minimizes I over candidates") {
  const auto q = solve(2, 1.0);
  const auto k = CouplingMatrix::create({{1.0, 0.3, 2.0}, {0.3, 2.0, 0.1}, {2.0, 0.1, 0.5}});
  const auto an = analyze_amplitudes(k, 1.0, q.i1);
  const auto gs = assemble(k, q, an.selection);
  for (const auto& c : an.selection.candidates) CHECK(gs.i_val <= assemble(k, q, c).i_val * (1.0 + 1e-10));
}

TEST_CASE("radial equation residual") {
  const auto q = solve(1, 1.0);
  const auto gs = build({{-1.0, 2.0}, {2.0, -1.0}}, q);
  const double r = pde_residual(gs);
  CHECK(r < 1e-4);
  // Second order in h.
  const auto fine = build({{-1.0, 2.0}, {2.0, -1.0}}, solve(1, 1.0, 40.0, 32769));
  CHECK(r / pde_residual(fine) == doctest::Approx(4.0).epsilon(0.2));
  auto bad = gs;
  for (double& b : bad.amplitudes.b) b *= 1.1;
  CHECK(pde_residual(bad) > 1e-2);
  // Scalar profile on a finer grid.
  CHECK(pde_residual(build({{1.0}}, solve(1, 1.0, 20.0, 65537))) < 1e-6);
}

TEST_CASE("optimal constant") {
  const auto q = solve(1, 2.0);
  const auto gs = build({{1.0}}, q);
  CHECK(gn_constant(gs) == doctest::Approx(oracle::gn_1d_quintic).epsilon(1e-10));
  CHECK(gn_constant(build({{0.0, 1.0}, {1.0, 0.0}}, q)) == doctest::Approx(1.0 / (oracle::pi * oracle::pi)).epsilon(1e-10));

  // GN invariance: U -> cU multiplies M, T by c^2 and J by c^{2p+2};
  // U -> U(lambda x) multiplies M by l^{-N}, T by l^{2-N}, J by l^{-N}.
  const Functionals f = gs.functionals();
  for (double c : {0.5, 2.0}) {
    const double s = c * c, sj = std::pow(c, 2.0 * gs.p() + 2.0);
    CHECK(gn_value({f.mass * s, f.kinetic * s, f.j * sj}, 1, gs.p()) == doctest::Approx(gs.gn).epsilon(1e-8));
    const double l = c;
    CHECK(gn_value({f.mass / l, f.kinetic * l, f.j / l}, 1, gs.p()) == doctest::Approx(gs.gn).epsilon(1e-8));
  }
  // The same invariance through amplitude_functionals with multiplied amplitudes.
  std::vector<double> x = gs.amplitudes.b;
  for (double& v : x) v *= 1.7;
  CHECK(gn_value(amplitude_functionals(gs.coupling, q, x), 1, 2.0) == doctest::Approx(gs.gn).epsilon(1e-8));
}

TEST_CASE("sampled inequality") {
  const auto q = solve(1, 2.0);
  for (const auto& rows : {std::vector<std::vector<double>>{{1.0}}, {{0.0, 1.0}, {1.0, 0.0}}}) {
    const auto gs = build(rows, q);
    GnSampleConfig sc;
    sc.samples = 300;
    const auto rep = sample_gn_inequality(gs, gn_constant(gs), sc);
    CHECK(rep.violations == 0);
    CHECK(rep.positive_j > 0);
    CHECK(rep.max_ratio <= 1.0);
    CHECK(std::abs(rep.ground_state_ratio - 1.0) < 1e-6);
    sc.seed = 99;
    CHECK(sample_gn_inequality(gs, gn_constant(gs), sc).violations == 0);
    // A constant 5% too small is exceeded by the ground state itself.
    CHECK(sample_gn_inequality(gs, 0.95 * gn_constant(gs), sc).ground_state_ratio > 1.05);
  }
  const auto gs2 = build({{1.0}}, solve(2, 1.0));
  GnSampleConfig sc;
  sc.samples = 100;
  const auto rep = sample_gn_inequality(gs2, gn_constant(gs2), sc);
  CHECK(rep.violations == 0);
  CHECK(std::abs(rep.ground_state_ratio - 1.0) < 1e-6);
}

TEST_CASE("critical mass") {
  const auto gs = build({{1.0}}, solve(1, 2.0));
  const auto cm = critical_mass(gs);
  CHECK(cm.mass == doctest::Approx(std::sqrt(3.0) * oracle::pi / 2.0).epsilon(1e-9));
  CHECK(cm.ok());
  const auto town = build({{1.0}}, solve(2, 1.0));
  const auto ct = critical_mass(town);
  CHECK(ct.ok());
  const auto ref = petviashvili_profile(PetviashviliConfig{});
  CHECK(std::abs(ct.mass / ref.mass - 1.0) < 1e-5);
  CHECK_THROWS_AS(critical_mass(build({{1.0}}, solve(1, 1.0))), Error);
}

TEST_CASE("Nehari projection") {
  const auto q = solve(1, 1.0);
  const auto k = CouplingMatrix::create({{1.0}});
  // Any multiple of Q projects back to Q.
  for (double c : {0.3, 1.0, 4.0}) CHECK(nehari_level(k, q, std::vector<double>{c}) == doctest::Approx(q.i1).epsilon(1e-12));
  const auto rep = CouplingMatrix::create({{-1.0, 0.0}, {0.0, 1.0}});
  CHECK_THROWS_AS(nehari_level(rep, q, std::vector<double>{1.0, 0.0}), Error);
}

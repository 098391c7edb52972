#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "../oracles.hpp"
#include "doctest.h"
#include "mnls/amplitudes.hpp"
#include "mnls/error.hpp"

using namespace mnls;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

CouplingMatrix pair(double k11, double k12, double k22) { return CouplingMatrix::create({{k11, k12}, {k12, k22}}); }

CouplingMatrix random_attractive(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::vector<std::vector<double>> rows(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) rows[i][j] = rows[j][i] = u(rng);
  return CouplingMatrix::create(rows);
}

double max_residual(const CouplingMatrix& k, double p, const AmplitudeSolution& s) {
  const auto f = amplitude_residual(k, p, s.support, s.b);
  double r = 0.0;
  for (double v : f) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace

TEST_CASE("closed-form solutions on a support") {
  auto sols = solve_on_support(pair(-1.0, 2.0, -1.0), 1.0, Support::full(2));
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].b[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sols[0].b[1] == doctest::Approx(1.0).epsilon(1e-12));

  sols = solve_on_support(pair(1.0, 3.0, 2.0), 1.0, Support::full(2));
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].b[0] == doctest::Approx(std::sqrt(1.0 / 7.0)).epsilon(1e-10));
  CHECK(sols[0].b[1] == doctest::Approx(std::sqrt(2.0 / 7.0)).epsilon(1e-10));
  CHECK(sols[0].norm2 == doctest::Approx(3.0 / 7.0).epsilon(1e-10));

  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const auto one = solve_on_support(CouplingMatrix::create({{1.0}}), p, Support::full(1));
    REQUIRE(one.size() == 1);
    CHECK(one[0].b[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
  // No positive solution: k11 a^2 + k12 b^2 = 1 with both entries negative.
  CHECK(kind_of([] { solve_on_support(pair(-1.0, -1.0, -1.0), 1.0, Support::full(2)); }) ==
        ErrorKind::NoSolutionFound);
}

TEST_CASE("every reported solution satisfies the system") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const double p = 0.5 + 0.25 * (trial % 7);
    const auto k = random_attractive(rng, 2 + trial % 2);
    for (Support s : enumerate_supports(k, detect_partition(k))) {
      std::vector<AmplitudeSolution> sols;
      try {
        sols = solve_on_support(k, p, s);
      } catch (const Error&) {
        continue;
      }
      for (const auto& sol : sols) {
        CHECK(max_residual(k, p, sol) < 1e-10);
        CHECK(sol.residual < 1e-10);
        for (std::size_t i = 0; i < k.size(); ++i) CHECK((sol.b[i] > 0.0) == s.contains(i));
      }
    }
  }
}

TEST_CASE("scaling covariance") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = 0.5 + 0.5 * (trial % 5), c = 0.3 + 0.2 * trial;
    const auto k = random_attractive(rng, 2);
    const auto full = Support::full(2);
    std::vector<AmplitudeSolution> a, b;
    try {
      a = solve_on_support(k, p, full);
    } catch (const Error&) {
      continue;
    }
    b = solve_on_support(k.scaled(c), p, full);
    REQUIRE(a.size() == b.size());
    const double f = std::pow(c, -0.5 / p);
    for (std::size_t s = 0; s < a.size(); ++s)
      for (std::size_t i = 0; i < 2; ++i) CHECK(b[s].b[i] == doctest::Approx(f * a[s].b[i]).epsilon(1e-8));
  }
}

TEST_CASE("permutation equivariance") {
  std::mt19937_64 rng(9);
  const std::vector<std::size_t> perm{2, 0, 1};
  for (int trial = 0; trial < 10; ++trial) {
    const double p = 0.75 + 0.5 * (trial % 4);
    const auto k = random_attractive(rng, 3);
    const auto kp = k.permuted(perm);
    const auto a = analyze_amplitudes(k, p, 1.0).selection.candidates;
    const auto b = analyze_amplitudes(kp, p, 1.0).selection.candidates;
    REQUIRE(a.size() == b.size());
    // Map b back to the original labels, where entry perm[i] of x is b[i].
    for (const auto& sb : b) {
      std::vector<double> back(3);
      for (std::size_t i = 0; i < 3; ++i) back[perm[i]] = sb.b[i];
      const bool found = std::any_of(a.begin(), a.end(), [&](const AmplitudeSolution& sa) {
        for (std::size_t i = 0; i < 3; ++i)
          if (std::abs(sa.b[i] - back[i]) > 1e-8) return false;
        return true;
      });
      CHECK(found);
    }
  }
}

TEST_CASE("support enumeration") {
  const auto k2 = pair(1.0, 1.0, 1.0);
  CHECK(enumerate_supports(k2, detect_partition(k2)) ==
        std::vector<Support>{Support::of({0}), Support::of({1}), Support::of({0, 1})});
  const auto k1 = CouplingMatrix::create({{1.0}});
  CHECK(enumerate_supports(k1, detect_partition(k1)) == std::vector<Support>{Support::of({0})});
  const auto k3 = CouplingMatrix::create({{1.0, 1.0, -1.0}, {1.0, 1.0, -1.0}, {-1.0, -1.0, 1.0}});
  CHECK(enumerate_supports(k3, detect_partition(k3)) ==
        std::vector<Support>{Support::of({0}), Support::of({1}), Support::of({0, 1}), Support::of({2})});
  const auto bad = CouplingMatrix::create({{1.0, 1.0, -1.0}, {1.0, 1.0, 1.0}, {-1.0, 1.0, 1.0}});
  CHECK(kind_of([&] { enumerate_supports(bad, detect_partition(bad)); }) == ErrorKind::InvalidPartition);
  CHECK(kind_of([&] { analyze_amplitudes(bad, 1.0, 1.0); }) == ErrorKind::InvalidPartition);
}

TEST_CASE("selection at p = 1") {
  // All equal: a continuum a^2 + b^2 = 1 ties with the single supports.
  auto sel = analyze_amplitudes(pair(1.0, 1.0, 1.0), 1.0, 1.0).selection;
  CHECK(sel.degenerate_family);
  for (const auto& w : sel.winners) CHECK(w.norm2 == doctest::Approx(1.0).epsilon(1e-8));

  sel = analyze_amplitudes(pair(1.0, 3.0, 2.0), 1.0, 1.0).selection;
  REQUIRE(sel.winners.size() == 1);
  CHECK(sel.winners[0].support == Support::full(2));
  CHECK(sel.winners[0].norm2 == doctest::Approx(3.0 / 7.0).epsilon(1e-10));

  sel = analyze_amplitudes(pair(2.0, 1.0, 3.0), 1.0, 1.0).selection;
  REQUIRE(sel.winners.size() == 1);
  CHECK(sel.winners[0].support == Support::of({1}));
  CHECK(sel.winners[0].norm2 == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  const auto pr = oracle::cubic_pair(2.0, 1.0, 3.0);
  const bool has_full = std::any_of(sel.candidates.begin(), sel.candidates.end(), [&](const AmplitudeSolution& c) {
    return c.support == Support::full(2) && std::abs(c.norm2 - (pr.a * pr.a + pr.b * pr.b)) < 1e-10;
  });
  CHECK(has_full);
  CHECK(pr.a * pr.a + pr.b * pr.b == doctest::Approx(3.0 / 5.0));

  // Winners minimize over every candidate.
  for (const auto& c : sel.candidates) CHECK(c.norm2 >= sel.winners[0].norm2 * (1.0 - 1e-8));
  CHECK(kind_of([] { select_minimal({}, 1.0); }) == ErrorKind::EmptyCandidates);
}

TEST_CASE("symmetric oracle") {
  CHECK(oracle_symmetric(-1.0, 2.0, 1.0) == doctest::Approx(1.0));
  CHECK(oracle_symmetric(1.0, 1.0, 3.0) == doctest::Approx(0.8908987181403393).epsilon(1e-12));
  CHECK(oracle_symmetric(1.0, 3.0, 1.0) == doctest::Approx(0.5));
  CHECK(oracle_symmetric(1.0, 1.0, 3.0) == doctest::Approx(oracle::equal_amplitude(1.0, 1.0, 3.0)));
  // (p - 2)(p k11 - k12) < 0 and no repulsive self-coupling.
  CHECK(kind_of([] { oracle_symmetric(1.0, 0.5, 1.0); }) == ErrorKind::RegimeViolation);
  CHECK(kind_of([] { oracle_symmetric(-1.0, 0.5, 1.0); }) == ErrorKind::RegimeViolation);
  for (auto [k11, k12, p] : {std::tuple{-1.0, 2.0, 1.0}, std::tuple{1.0, 1.0, 3.0}, std::tuple{-0.5, 3.0, 2.0}}) {
    const auto sols = solve_on_support(pair(k11, k12, k11), p, Support::full(2));
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].b[0] == doctest::Approx(oracle_symmetric(k11, k12, p)).epsilon(1e-8));
    CHECK(sols[0].b[1] == doctest::Approx(oracle_symmetric(k11, k12, p)).epsilon(1e-8));
  }
}

TEST_CASE("ratio function roots") {
  for (auto [k11, k12, p] : {std::tuple{1.0, 1.0, 3.0}, std::tuple{1.0, 0.25, 0.5}, std::tuple{2.0, 0.7, 1.3}})
    CHECK(f_ratio(k11, k12, p, 1.0) == 0.0);
  auto rep = analyze_f_roots(1.0, 1.0, 3.0);
  REQUIRE(rep.roots.size() == 1);
  CHECK(rep.roots[0] == doctest::Approx(1.0));
  rep = analyze_f_roots(1.0, 0.5, 1.5);
  CHECK(rep.roots.size() == 1);
  rep = analyze_f_roots(1.0, 0.25, 0.5);
  REQUIRE(rep.roots.size() == 3);
  CHECK(rep.unit_root);
  CHECK(rep.pairing_error < 1e-8);
  for (int i = 0; i < 3; ++i) CHECK(rep.roots[i] == doctest::Approx(oracle::ratio_roots[i]).epsilon(1e-10));
  // Roots are amplitude ratios of actual solutions.
  const auto sols = solve_on_support(pair(1.0, 0.25, 1.0), 0.5, Support::full(2));
  CHECK(sols.size() == 3);
}

TEST_CASE("small cross coupling") {
  auto pred = small_beta_regime(pair(1.0, 0.01, 4.0), 2.0);
  CHECK(pred.indices == std::vector<std::size_t>{1});
  CHECK(pred.amplitude == doctest::Approx(std::pow(4.0, -0.25)).epsilon(1e-12));
  const auto sel = analyze_amplitudes(pair(1.0, 0.01, 4.0), 2.0, 1.0).selection;
  REQUIRE(sel.winners.size() == 1);
  CHECK(sel.winners[0].support == Support::of({1}));
  CHECK(sel.winners[0].b[1] == doctest::Approx(0.7071068).epsilon(1e-7));
  pred = small_beta_regime(pair(1.0, 0.01, 1.0), 2.0);
  CHECK(pred.indices == std::vector<std::size_t>{0, 1});
  CHECK(kind_of([] { small_beta_regime(pair(1.0, 0.01, 1.0), 1.0); }) == ErrorKind::RegimeViolation);
}

#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "mnls/coupling.hpp"
#include "mnls/error.hpp"

using namespace mnls;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("coupling construction") {
  CHECK(CouplingMatrix::create({{1.0}}).size() == 1);
  const auto k = CouplingMatrix::create({{1.0, 2.0}, {2.0, 1.0}});
  CHECK(k(0, 1) == 2.0);
  CHECK(k(1, 0) == 2.0);
  CHECK(kind_of([] { CouplingMatrix::create({{1.0, 2.0}, {3.0, 1.0}}); }) == ErrorKind::AsymmetricInput);
  CHECK(kind_of([] { CouplingMatrix::create({{1.0, NAN}, {NAN, 1.0}}); }) == ErrorKind::NonFinite);
  CHECK(kind_of([] { CouplingMatrix::create({{1.0, 2.0}}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { CouplingMatrix::create(std::vector<std::vector<double>>{}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("quadratic form, scaling and permutation") {
  const auto k = CouplingMatrix::create({{1.0, 2.0, 0.5}, {2.0, -1.0, 3.0}, {0.5, 3.0, 4.0}});
  const std::vector<double> x{1.0, 2.0, 3.0};
  // 1 + 4*(-1) + 9*4 + 2*(2*2 + 0.5*3 + 3*6)
  CHECK(k.quadratic_form(x) == doctest::Approx(1.0 - 4.0 + 36.0 + 2.0 * (4.0 + 1.5 + 18.0)));
  CHECK(k.scaled(2.0)(1, 2) == 6.0);
  const std::vector<std::size_t> perm{2, 0, 1};
  const auto kp = k.permuted(perm);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(kp(i, j) == k(perm[i], perm[j]));
}

TEST_CASE("P1 examples") {
  CHECK(check_p1(CouplingMatrix::create({{1.0}})));
  CHECK_FALSE(check_p1(CouplingMatrix::create({{-1.0, 0.0}, {0.0, -1.0}})));
  CHECK(check_p1(CouplingMatrix::create({{-1.0, 2.0}, {2.0, -1.0}})));
  CHECK_FALSE(check_p1(CouplingMatrix::create({{-1.0, -1.0}, {-1.0, -1.0}})));
  // Positive only strictly inside the cone: x = (1, 1, 1) gives -3 + 2*(1.6*3) > 0.
  CHECK(check_p1(CouplingMatrix::create({{-1.0, 1.6, 1.6}, {1.6, -1.0, 1.6}, {1.6, 1.6, -1.0}})));
  CHECK_FALSE(check_p1(CouplingMatrix::create({{-1.0, 0.9}, {0.9, -1.0}})));
}

TEST_CASE("P1 is permutation invariant and holds with a positive diagonal") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + trial % 4;
    std::vector<std::vector<double>> rows(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) rows[i][j] = rows[j][i] = (i == j ? -1.0 + 0.5 * u(rng) : u(rng));
    const auto k = CouplingMatrix::create(rows);
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(check_p1(k) == check_p1(k.permuted(perm)));
    rows[trial % m][trial % m] = 0.1;
    CHECK(check_p1(CouplingMatrix::create(rows)));
  }
}

TEST_CASE("partition detection") {
  const auto all = detect_partition(CouplingMatrix::create({{1.0, 0.5, 0.0}, {0.5, 1.0, 2.0}, {0.0, 2.0, 1.0}}));
  CHECK(all.valid);
  CHECK(all.groups == std::vector<std::vector<std::size_t>>{{0, 1, 2}});

  const auto two = detect_partition(CouplingMatrix::create({{1.0, 1.0, -1.0}, {1.0, 1.0, -1.0}, {-1.0, -1.0, 1.0}}));
  CHECK(two.valid);
  CHECK(two.groups == std::vector<std::vector<std::size_t>>{{0, 1}, {2}});
  CHECK_FALSE(two.violating_pair);

  const auto bad = detect_partition(CouplingMatrix::create({{1.0, 1.0, -1.0}, {1.0, 1.0, 1.0}, {-1.0, 1.0, 1.0}}));
  CHECK_FALSE(bad.valid);
  REQUIRE(bad.violating_pair);
  CHECK(*bad.violating_pair == std::pair<std::size_t, std::size_t>{0, 2});
}

TEST_CASE("valid partitions have negative cross-group couplings") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int valid = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 3 + trial % 4;
    std::vector<std::vector<double>> rows(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) rows[i][j] = rows[j][i] = u(rng);
    const auto part = detect_partition(CouplingMatrix::create(rows));
    std::vector<int> owner(m, -1);
    for (std::size_t g = 0; g < part.groups.size(); ++g)
      for (auto i : part.groups[g]) {
        CHECK(owner[i] == -1);
        owner[i] = static_cast<int>(g);
      }
    CHECK(std::count(owner.begin(), owner.end(), -1) == 0);
    if (!part.valid) {
      REQUIRE(part.violating_pair);
      const auto [i, j] = *part.violating_pair;
      CHECK(owner[i] == owner[j]);
      CHECK(rows[i][j] < 0.0);
      continue;
    }
    ++valid;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) CHECK((rows[i][j] >= 0.0) == (owner[i] == owner[j]));
  }
  CHECK(valid > 10);
}

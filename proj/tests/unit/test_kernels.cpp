#include <cmath>
#include <cstdlib>
#include <random>

#include "doctest.h"
#include "mnls/evolution.hpp"
#include "mnls/kernels.hpp"

using namespace mnls;
using kernels::cplx;

TEST_CASE("kernel variants agree with the scalar reference") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto& ref = kernels::scalar_table();
  const auto variants = kernels::available();
  REQUIRE(!variants.empty());
  CHECK(variants.front() == &ref);
  for (std::size_t len : {0u, 1u, 2u, 3u, 7u, 8u, 33u, 1024u}) {
    std::vector<cplx> v(len), m(len);
    std::vector<double> w(len);
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = {n(rng), n(rng)};
      m[i] = {n(rng), n(rng)};
      w[i] = n(rng);
    }
    auto v_ref = v;
    ref.cmul(v_ref.data(), m.data(), len);
    std::vector<double> a_ref(len);
    ref.abs2(v.data(), a_ref.data(), len);
    const double s_ref = ref.sum_abs2(v.data(), len);
    const double ws_ref = ref.weighted_sum_abs2(v.data(), w.data(), len);
    for (const auto* k : variants) {
      CAPTURE(k->name);
      CAPTURE(len);
      auto vk = v;
      k->cmul(vk.data(), m.data(), len);
      for (std::size_t i = 0; i < len; ++i) CHECK(std::abs(vk[i] - v_ref[i]) <= 1e-14 * (1.0 + std::abs(v_ref[i])));
      std::vector<double> ak(len);
      k->abs2(v.data(), ak.data(), len);
      for (std::size_t i = 0; i < len; ++i) CHECK(ak[i] == doctest::Approx(a_ref[i]).epsilon(1e-15));
      CHECK(k->sum_abs2(v.data(), len) == doctest::Approx(s_ref).epsilon(1e-13));
      CHECK(k->weighted_sum_abs2(v.data(), w.data(), len) == doctest::Approx(ws_ref).epsilon(1e-12).scale(1.0 + s_ref));
    }
  }
}

TEST_CASE("lookup by name") {
  CHECK(kernels::find("scalar") == &kernels::scalar_table());
  CHECK(kernels::find("no-such-kernel") == nullptr);
  for (const auto* k : kernels::available()) CHECK(kernels::find(k->name) == k);
}

TEST_CASE("evolution is variant-independent") {
  const Grid g{2, 16.0, 64};
  const auto k = CouplingMatrix::create({{1.0, 0.4}, {0.4, 0.8}});
  const FieldState v0 = gaussian_data(g, std::vector<double>{1.2, 0.9}, 1.3);
  Stepper ref(g, k, 1.0);
  ref.set_kernel(kernels::scalar_table());
  FieldState a = v0;
  for (int i = 0; i < 100; ++i) ref.step(a, 1e-2);
  const auto da = ref.diagnostics(a);
  for (const auto* kern : kernels::available()) {
    CAPTURE(kern->name);
    Stepper st(g, k, 1.0);
    st.set_kernel(*kern);
    FieldState b = v0;
    for (int i = 0; i < 100; ++i) st.step(b, 1e-2);
    double d = 0.0;
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < g.size(); ++i) d = std::max(d, std::abs(a.v[c][i] - b.v[c][i]));
    CHECK(d < 1e-12);
    const auto db = st.diagnostics(b);
    CHECK(db.energy == doctest::Approx(da.energy).epsilon(1e-12));
    CHECK(db.mass[1] == doctest::Approx(da.mass[1]).epsilon(1e-13));
  }
}

#include <stdlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "mnls/config.hpp"
#include "mnls/error.hpp"
#include "mnls/reports.hpp"
#include "mnls/snapshot.hpp"

using namespace mnls;

namespace {

ErrorKind parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mnls_unit_" + std::to_string(::getpid()) + "_" + name);
}

const char* sample = R"(# two attractive components
seed = 12345678901234

[problem]
dim = 2
p = 1.0
coupling = [[1.0, 3.0],
            [3.0, 2.0]]
gn_samples = 50

[profile]
r_max = 30
n_grid = 8193

[evolution]
length = 24
n = 128
dt = 0.001
t_end = 0.5
initial = "gaussian"
amplitudes = [1.0, 0.5]
width = 2
)";

}  // namespace

TEST_CASE("parse a full problem file") {
  const Config c = parse_config(sample);
  CHECK(c.seed == 12345678901234ull);
  CHECK(c.dim == 2);
  CHECK(c.coupling == std::vector<std::vector<double>>{{1.0, 3.0}, {3.0, 2.0}});
  CHECK(c.gn_samples == 50);
  CHECK(c.profile.r_max == 30.0);
  CHECK(c.profile.n_grid == 8193);
  REQUIRE(c.evolution);
  CHECK(c.evolution->grid.dim == 2);
  CHECK(c.evolution->grid.n == 128);
  CHECK(c.evolution->initial == "gaussian");
  CHECK(c.evolution->amplitudes == std::vector<double>{1.0, 0.5});
  CHECK(c.profile_config().dim == 2);
  CHECK(c.profile_config().n_grid == 8193);
}

TEST_CASE("round trip") {
  const Config c = parse_config(sample);
  const std::string text = serialize_config(c);
  const Config back = parse_config(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
  Config d;
  d.p = 0.1 + 0.2;
  CHECK(parse_config(serialize_config(d)) == d);
}

TEST_CASE("config errors") {
  CHECK(parse_error("[problem]\nfoo = 1\n") == ErrorKind::ConfigError);
  CHECK(parse_error("[nowhere]\n") == ErrorKind::ConfigError);
  CHECK(parse_error("[problem]\ndim = 1\ndim = 2\n") == ErrorKind::ConfigError);
  CHECK(parse_error("[problem]\ndim = one\n") == ErrorKind::ConfigError);
  CHECK(parse_error("[problem]\ncoupling = [[1, 2], [2]]\n") == ErrorKind::ConfigError);
  CHECK(parse_error("[problem\n") == ErrorKind::ConfigError);
  CHECK(parse_error("[evolution]\ninitial = \"sideways\"\n") == ErrorKind::ConfigError);
  try {
    parse_config("[problem]\ndim = 1\n\np = x\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/mnls.toml"), Error);
}

TEST_CASE("seed from the environment") {
  Config c;
  ::setenv("MNLS_SEED", "42", 1);
  apply_environment(c);
  CHECK(c.seed == 42);
  ::setenv("MNLS_SEED", "-3", 1);
  CHECK_THROWS_AS(apply_environment(c), Error);
  ::unsetenv("MNLS_SEED");
  Config d;
  apply_environment(d);
  CHECK(d.seed == Config{}.seed);
}

TEST_CASE("snapshot round trip") {
  const Grid g{2, 12.0, 64};
  FieldState s = gaussian_data(g, std::vector<double>{1.0, -0.25}, 1.1);
  s.v[1][5] = {1e-300, -3.5};
  s.t = 0.125;
  const auto path = temp("snap.bin").string();
  write_snapshot(path, s);
  CHECK(std::filesystem::file_size(path) == 12 + 8 + 2 * g.size() * 16);
  const FieldState r = read_snapshot(path, g.length);
  CHECK(r.grid == g);
  CHECK(r.t == s.t);
  CHECK(r.v == s.v);

  // Truncation and trailing bytes are rejected.
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 1);
  CHECK_THROWS_AS(read_snapshot(path, g.length), Error);
  write_snapshot(path, s);
  { std::ofstream(path, std::ios::app | std::ios::binary) << 'x'; }
  CHECK_THROWS_AS(read_snapshot(path, g.length), Error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_snapshot(path, g.length), Error);
}

TEST_CASE("reports") {
  PartitionStructure part;
  part.groups = {{0, 1}, {2}};
  part.valid = true;
  const json j = partition_json(part);
  CHECK(j["valid"] == true);
  CHECK(j["violating_pair"].is_null());
  CHECK(j["groups"][1][0] == 2);
  CHECK(support_json(Support::of({0, 2})) == json::array({0, 2}));

  SeriesPoint p{0.5, {1.0, 2.0}, 3.0, 4.0, 5.0, 6.0};
  const auto path = temp("series.csv").string();
  write_series_csv(path, {p});
  std::ifstream is(path);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(header == "t,mass_0,mass_1,T,E,J,window_mass");
  CHECK(row == "0.5,1,2,3,4,5,6");
  std::filesystem::remove(path);
}

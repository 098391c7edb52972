#include "mnls/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <fstream>

#include "mnls/error.hpp"

namespace mnls {

namespace {

template <typename T>
void put(std::ostream& os, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  os.write(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bits{};
  if (!is.read(reinterpret_cast<char*>(bits.data()), sizeof(T)))
    throw Error(ErrorKind::IoError, "snapshot is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_snapshot(const std::string& path, const FieldState& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  put<std::uint32_t>(os, static_cast<std::uint32_t>(state.grid.dim));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(state.grid.n));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(state.components()));
  put<double>(os, state.t);
  for (const auto& comp : state.v)
    for (const auto& z : comp) {
      put<double>(os, z.real());
      put<double>(os, z.imag());
    }
  if (!os) throw Error(ErrorKind::IoError, "failed writing " + path);
}

FieldState read_snapshot(const std::string& path, double length) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path);
  Grid g;
  g.dim = static_cast<int>(get<std::uint32_t>(is));
  g.n = get<std::uint32_t>(is);
  const std::uint32_t m = get<std::uint32_t>(is);
  g.length = length;
  g.validate();
  if (m == 0 || m > 64) throw Error(ErrorKind::IoError, "snapshot has an implausible component count");
  FieldState s = zero_data(g, m);
  s.t = get<double>(is);
  for (auto& comp : s.v)
    for (auto& z : comp) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      z = cplx(re, im);
    }
  if (is.peek() != std::char_traits<char>::eof()) throw Error(ErrorKind::IoError, "snapshot has trailing data");
  return s;
}

}  // namespace mnls

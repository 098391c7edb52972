#include "mnls/quadrature.hpp"

#include <numbers>

#include "mnls/error.hpp"

namespace mnls {

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "simpson needs at least two samples");
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  if (n == 3) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);

  std::size_t intervals = n - 1;
  double tail = 0.0;
  if (intervals % 2 == 1) {
    const std::size_t k = n - 4;
    tail = 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
    intervals -= 3;
  }
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < intervals; i += 2) odd += f[i];
  for (std::size_t i = 2; i < intervals; i += 2) even += f[i];
  return h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[intervals]) + tail;
}

double surface_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw Error(ErrorKind::InvalidArgument, "dimension must be 1, 2 or 3");
  }
}

}  // namespace mnls

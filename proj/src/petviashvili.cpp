#include "mnls/petviashvili.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "mnls/error.hpp"
#include "mnls/fft.hpp"

namespace mnls {

PetviashviliResult petviashvili_profile(const PetviashviliConfig& cfg) {
  if (cfg.dim < 1 || cfg.dim > 3) throw Error(ErrorKind::InvalidArgument, "dimension must be 1, 2 or 3");
  if (!(cfg.p > 0.0)) throw Error(ErrorKind::InvalidArgument, "p must be positive");
  if (cfg.n < 16 || cfg.length <= 0.0) throw Error(ErrorKind::InvalidArgument, "bad Petviashvili grid");

  const Fft fft(cfg.dim, cfg.n);
  const std::size_t total = fft.size();
  const std::size_t n = cfg.n;
  const double h = cfg.length / static_cast<double>(n);
  const auto k2 = wavenumber_squared(cfg.dim, n, cfg.length);
  const double gamma = (2.0 * cfg.p + 1.0) / (2.0 * cfg.p);
  const double inv_total = 1.0 / static_cast<double>(total);

  // Grid point j sits at -L/2 + j h, so index n/2 along each axis is the origin.
  std::vector<double> u(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double r2 = 0.0;
    for (int d = 0; d < cfg.dim; ++d) {
      const double x = -0.5 * cfg.length + h * static_cast<double>(rest % n);
      r2 += x * x;
      rest /= n;
    }
    u[idx] = 2.0 * std::exp(-0.5 * r2);
  }

  std::vector<std::complex<double>> uh(total), nh(total);
  PetviashviliResult res;
  double stab = 0.0;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    for (std::size_t i = 0; i < total; ++i) {
      uh[i] = u[i];
      nh[i] = std::pow(std::abs(u[i]), 2.0 * cfg.p) * u[i];
    }
    fft.forward(uh);
    fft.forward(nh);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      num += (1.0 + k2[i]) * std::norm(uh[i]);
      den += std::real(std::conj(uh[i]) * nh[i]);
    }
    stab = num / den;
    const double factor = std::pow(stab, gamma);
    for (std::size_t i = 0; i < total; ++i) nh[i] *= factor / (1.0 + k2[i]);
    fft.inverse(nh);
    double diff = 0.0;
    double peak = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      const double next = nh[i].real() * inv_total;
      diff = std::max(diff, std::abs(next - u[i]));
      peak = std::max(peak, std::abs(next));
      u[i] = next;
    }
    if (!std::isfinite(diff)) throw Error(ErrorKind::NoConvergence, "Petviashvili iteration diverged");
    if (diff <= cfg.tol * peak) {
      ++it;
      break;
    }
  }
  if (it >= cfg.max_iterations) throw Error(ErrorKind::NoConvergence, "Petviashvili iteration did not converge");

  for (std::size_t i = 0; i < total; ++i) uh[i] = u[i];
  fft.forward(uh);
  const double cell = std::pow(h, cfg.dim);
  double mass = 0.0;
  double j1 = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    mass += u[i] * u[i];
    j1 += std::pow(std::abs(u[i]), 2.0 * cfg.p + 2.0);
  }
  // Parseval: sum |u|^2 = (1/total) sum |uh|^2.
  double kin = 0.0;
  for (std::size_t i = 0; i < total; ++i) kin += k2[i] * std::norm(uh[i]);

  std::size_t origin = 0;
  std::size_t stride = 1;
  for (int d = 0; d < cfg.dim; ++d) {
    origin += (n / 2) * stride;
    stride *= n;
  }
  res.q0 = u[origin];
  res.mass = mass * cell;
  res.kinetic = kin * inv_total * cell;
  res.j1 = j1 * cell;
  res.iterations = it;
  res.stabilizer = stab;
  return res;
}

}  // namespace mnls

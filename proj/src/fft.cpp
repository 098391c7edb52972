#include "mnls/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>
#include <utility>

#include "mnls/error.hpp"

namespace mnls {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(int dim, std::size_t n) : dim_(dim), n_(n) {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::InvalidArgument, "FFT dimension must be 1..3");
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "FFT needs n >= 2");
  size_ = 1;
  int dims[3];
  for (int d = 0; d < dim; ++d) {
    size_ *= n;
    dims[d] = static_cast<int>(n);
  }
  std::vector<std::complex<double>> scratch(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft(dim, dims, buf, buf, FFTW_FORWARD, flags);
  inverse_plan_ = fftw_plan_dft(dim, dims, buf, buf, FFTW_BACKWARD, flags);
  if (!forward_plan_ || !inverse_plan_) throw Error(ErrorKind::InvalidArgument, "FFTW planning failed");
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

Fft::Fft(Fft&& other) noexcept
    : dim_(other.dim_),
      n_(other.n_),
      size_(other.size_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    std::swap(dim_, other.dim_);
    std::swap(n_, other.n_);
    std::swap(size_, other.size_);
    std::swap(forward_plan_, other.forward_plan_);
    std::swap(inverse_plan_, other.inverse_plan_);
  }
  return *this;
}

void Fft::forward(std::span<std::complex<double>> data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void Fft::inverse(std::span<std::complex<double>> data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), buf, buf);
}

std::vector<double> wavenumbers(std::size_t n, double length) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / length;
  for (std::size_t j = 0; j < n; ++j) {
    const auto s = static_cast<long>(j);
    k[j] = base * static_cast<double>(j < n / 2 ? s : s - static_cast<long>(n));
  }
  return k;
}

std::vector<double> wavenumber_squared(int dim, std::size_t n, double length) {
  const auto k = wavenumbers(n, length);
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  std::vector<double> k2(total, 0.0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double kd = k[rest % n];
      s += kd * kd;
      rest /= n;
    }
    k2[idx] = s;
  }
  return k2;
}

}  // namespace mnls

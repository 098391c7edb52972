#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mnls {

/// In-place complex FFT over a dim-dimensional periodic grid with n points per
/// axis. The inverse is unnormalized. Plans use FFTW_ESTIMATE so the
/// arithmetic is identical from run to run.
class Fft {
 public:
  Fft(int dim, std::size_t n);
  ~Fft();
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(std::span<std::complex<double>> data) const;
  void inverse(std::span<std::complex<double>> data) const;

  int dim() const { return dim_; }
  std::size_t n() const { return n_; }
  std::size_t size() const { return size_; }

 private:
  int dim_ = 0;
  std::size_t n_ = 0;
  std::size_t size_ = 0;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Angular wavenumbers 2*pi/L * {0, 1, ..., n/2-1, -n/2, ..., -1}.
std::vector<double> wavenumbers(std::size_t n, double length);

/// |xi|^2 for every mode of a dim-dimensional grid, row-major.
std::vector<double> wavenumber_squared(int dim, std::size_t n, double length);

}  // namespace mnls

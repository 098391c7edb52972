#include "mnls/kernels.hpp"

namespace mnls::kernels {

namespace {

void cmul(cplx* v, const cplx* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = v[i].real(), ai = v[i].imag();
    const double br = m[i].real(), bi = m[i].imag();
    v[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void abs2(const cplx* v, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
}

double sum_abs2(const cplx* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
  return s;
}

double weighted_sum_abs2(const cplx* v, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * (v[i].real() * v[i].real() + v[i].imag() * v[i].imag());
  return s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", cmul, abs2, sum_abs2, weighted_sum_abs2};
  return table;
}

}  // namespace mnls::kernels

#include <arm_neon.h>

#include "mnls/kernels.hpp"

namespace mnls::kernels {

namespace {

// One complex number per 128-bit register: [re im].

void cmul(cplx* v, const cplx* m, std::size_t n) {
  auto* pv = reinterpret_cast<double*>(v);
  const auto* pm = reinterpret_cast<const double*>(m);
  const float64x2_t sign = {-1.0, 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t a = vld1q_f64(pv + 2 * i);
    const float64x2_t b = vld1q_f64(pm + 2 * i);
    const float64x2_t t1 = vmulq_laneq_f64(a, b, 0);
    const float64x2_t t2 = vmulq_laneq_f64(vextq_f64(a, a, 1), b, 1);
    vst1q_f64(pv + 2 * i, vfmaq_f64(t1, sign, t2));
  }
}

void abs2(const cplx* v, double* out, std::size_t n) {
  const auto* pv = reinterpret_cast<const double*>(v);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(pv + 2 * i);
    const float64x2_t b = vld1q_f64(pv + 2 * i + 2);
    vst1q_f64(out + i, vpaddq_f64(vmulq_f64(a, a), vmulq_f64(b, b)));
  }
  for (; i < n; ++i) out[i] = v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
}

double sum_abs2(const cplx* v, std::size_t n) {
  const auto* pv = reinterpret_cast<const double*>(v);
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(pv + 2 * i);
    const float64x2_t b = vld1q_f64(pv + 2 * i + 2);
    acc0 = vfmaq_f64(acc0, a, a);
    acc1 = vfmaq_f64(acc1, b, b);
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
  return s;
}

double weighted_sum_abs2(const cplx* v, const double* w, std::size_t n) {
  const auto* pv = reinterpret_cast<const double*>(v);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t a = vld1q_f64(pv + 2 * i);
    acc = vfmaq_n_f64(acc, vmulq_f64(a, a), w[i]);
  }
  return vaddvq_f64(acc);
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{"neon", cmul, abs2, sum_abs2, weighted_sum_abs2};
  return table;
}

}  // namespace mnls::kernels

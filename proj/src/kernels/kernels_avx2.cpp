#include <immintrin.h>

#include "mnls/kernels.hpp"

namespace mnls::kernels {

namespace {

// Two interleaved complex numbers per 256-bit register: [re0 im0 re1 im1].

void cmul(cplx* v, const cplx* m, std::size_t n) {
  auto* pv = reinterpret_cast<double*>(v);
  const auto* pm = reinterpret_cast<const double*>(m);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(pv + 2 * i);
    const __m256d b = _mm256_loadu_pd(pm + 2 * i);
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    const __m256d r = _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
    _mm256_storeu_pd(pv + 2 * i, r);
  }
  for (; i < n; ++i) {
    const double ar = v[i].real(), ai = v[i].imag();
    const double br = m[i].real(), bi = m[i].imag();
    v[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void abs2(const cplx* v, double* out, std::size_t n) {
  const auto* pv = reinterpret_cast<const double*>(v);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(pv + 2 * i);
    const __m256d b = _mm256_loadu_pd(pv + 2 * i + 4);
    // hadd gives [|c0|^2 |c2|^2 |c1|^2 |c3|^2]
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; i < n; ++i) out[i] = v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
}

double hsum(__m256d x) {
  const __m128d lo = _mm256_castpd256_pd128(x);
  const __m128d hi = _mm256_extractf128_pd(x, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_abs2(const cplx* v, std::size_t n) {
  const auto* pv = reinterpret_cast<const double*>(v);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(pv + 2 * i);
    const __m256d b = _mm256_loadu_pd(pv + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
  return s;
}

double weighted_sum_abs2(const cplx* v, const double* w, std::size_t n) {
  const auto* pv = reinterpret_cast<const double*>(v);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(pv + 2 * i);
    const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)), 0x50);
    acc = _mm256_fmadd_pd(ww, _mm256_mul_pd(a, a), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * (v[i].real() * v[i].real() + v[i].imag() * v[i].imag());
  return s;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", cmul, abs2, sum_abs2, weighted_sum_abs2};
  return table;
}

}  // namespace mnls::kernels

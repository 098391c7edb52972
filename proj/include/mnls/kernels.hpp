#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace mnls::kernels {

using cplx = std::complex<double>;

/// Inner loops of the split-step evolver. Every variant must agree with the
/// scalar reference up to floating-point reassociation.
struct KernelTable {
  const char* name;
  /// v[i] *= m[i]
  void (*cmul)(cplx* v, const cplx* m, std::size_t n);
  /// out[i] = |v[i]|^2
  void (*abs2)(const cplx* v, double* out, std::size_t n);
  /// sum |v[i]|^2
  double (*sum_abs2)(const cplx* v, std::size_t n);
  /// sum w[i] |v[i]|^2
  double (*weighted_sum_abs2)(const cplx* v, const double* w, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(MNLS_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(MNLS_HAVE_NEON)
const KernelTable& neon_table();
#endif

/// Variants compiled in and supported by the running CPU, scalar first.
std::vector<const KernelTable*> available();

/// Best available variant. MNLS_KERNELS=<name> in the environment forces a
/// specific one (falls back to scalar when it is unavailable).
const KernelTable& active();

const KernelTable* find(std::string_view name);

}  // namespace mnls::kernels
